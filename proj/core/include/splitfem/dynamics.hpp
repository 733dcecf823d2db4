#pragma once

#include <utility>
#include <vector>

#include "splitfem/closures.hpp"
#include "splitfem/mesh.hpp"
#include "splitfem/operators.hpp"

namespace splitfem {

/// Nodal mass fluxes F^u = h0 * u0 and F^v = h0 * v0.
std::pair<NodalField, NodalField> mass_fluxes(const NodalField& h0, const NodalField& u0,
                                              const NodalField& v0);

/// Nodal Bernoulli function B = u0^2/2 + v0^2/2 + g h0.
NodalField bernoulli(const NodalField& h0, const NodalField& u0, const NodalField& v0, double g);

/// Weighted P1 mass matrix W(h)_{ll'} = sum_e h[e] int_e phi_l phi_l' dx.
TridiagCirculant assemble_pv_matrix(const ElementField& h, const Mesh& mesh);

/// Right-hand side of the PV equation: <phi_l, d v0> + f int phi_l.
std::vector<double> pv_rhs(const NodalField& v0, double f, const Mesh& mesh);

/// Nodal potential vorticity q from W(h) q = <phi, d v0> + f <phi, 1>.
/// Throws ValidationError naming the first element with h <= 0.
NodalField diagnose_pv(const ElementField& h, const NodalField& v0, double f, const Mesh& mesh,
                       const Operators& ops);

/// Tendencies of the topological equations with the given metric closure.
Tendency rhs(const State& state, const ModelParams& params, const ClosureSpec& spec,
             const Mesh& mesh, const Operators& ops);

/// Allocation-free repeated evaluation of rhs() for one simulation.
///
/// Holds scratch buffers, so one instance must not be shared between threads.
class TendencyEvaluator {
public:
    TendencyEvaluator(const Mesh& mesh, const Operators& ops, const ModelParams& params,
                      const ClosureSpec& spec);

    void operator()(const State& state, Tendency& out);

    /// Metric closure stage only (h0, u0, v0 into the internal buffers).
    void close(const State& state);

    const Mesh& mesh() const noexcept { return *mesh_; }
    const ClosureSpec& spec() const noexcept { return spec_; }
    const ModelParams& params() const noexcept { return params_; }

    std::span<const double> h0() const noexcept { return h0_; }
    std::span<const double> u0() const noexcept { return u0_; }
    std::span<const double> v0() const noexcept { return v0_; }
    std::span<const double> q() const noexcept { return q_; }

private:
    void diagnose_pv(const ElementField& h);

    const Mesh* mesh_;
    const Operators* ops_;
    ModelParams params_;
    ClosureSpec spec_;

    std::vector<double> h0_, u0_, v0_, q_;
    std::vector<double> flux_u_, flux_v_, bern_;
    std::vector<double> w_lower_, w_diag_, w_upper_;
    std::vector<double> pv_work_, inv_dx_;
};

}  // namespace splitfem
