#pragma once

#include <functional>
#include <string>

#include "splitfem/closures.hpp"
#include "splitfem/mesh.hpp"
#include "splitfem/operators.hpp"

namespace splitfem {

/// One row of the diagnostics time series.
///
/// `energy` is kinetic terms plus g <h, h0>, the potential pairing taken
/// without a 1/2. `energy_half_pe` halves that pairing; it is the functional
/// whose h-derivative is the Bernoulli function, so it is the one the
/// semi-discrete dynamics conserve.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double mass_e = 0.0;
    double mass_n = 0.0;
    double total_pv = 0.0;
    double enstrophy = 0.0;
    double energy_half_pe = 0.0;
};

/// Individual terms of the energy, integrated exactly element by element.
struct EnergyTerms {
    double kinetic_u = 0.0;          ///< 1/2 int u_h h0 u0
    double kinetic_v = 0.0;          ///< 1/2 int v_h h0 v0
    double potential_pairing = 0.0;  ///< g int h_h h0

    double energy() const noexcept { return kinetic_u + kinetic_v + potential_pairing; }
    double energy_half_pe() const noexcept { return kinetic_u + kinetic_v + 0.5 * potential_pairing; }
};

EnergyTerms energy_terms(const State& state, const ClosureSpec& spec, const Mesh& mesh,
                         const Operators& ops, double g);

/// Energy with metric closures applied; see DiagnosticsRecord.
double energy(const State& state, const ClosureSpec& spec, const Mesh& mesh, const Operators& ops,
              double g);

/// sum_e dx[e] h[e]
double mass_e(const State& state, const Mesh& mesh);
/// int h0 dx for the closed height field.
double mass_n(const NodalField& h0, const Mesh& mesh);
double mass_n(const State& state, const ClosureSpec& spec, const Mesh& mesh, const Operators& ops);

/// int q_h h_h dx, exact.
double total_pv(const ElementField& h, const NodalField& q, const Mesh& mesh);
double total_pv(const State& state, const NodalField& v0, double f, const Mesh& mesh,
                const Operators& ops);
/// int q_h^2 h_h dx, exact.
double enstrophy(const ElementField& h, const NodalField& q, const Mesh& mesh);

DiagnosticsRecord diagnose(const State& state, const ModelParams& params, const ClosureSpec& spec,
                           const Mesh& mesh, const Operators& ops, double t);

using ScalarFunction = std::function<double(double)>;

/// L2 norm of (field_h - reference) with five-point Gauss per element.
double l2_error(const NodalField& field, const ScalarFunction& reference, const Mesh& mesh);
double l2_error(const ElementField& field, const ScalarFunction& reference, const Mesh& mesh);

/// Closed-form angular frequency of the averaged closure: sqrt(gH) sin(k dx) / dx.
double dispersion_avg_analytic(double k, double g, double h_mean, double dx);

struct DispersionSample {
    double k = 0.0;
    double omega = 0.0;
    std::string scheme;
};

/// Measured angular frequency of the linearized gravity-wave system at the
/// rest state for wavenumber 2 pi k_index / L. Requires a uniform mesh; f is
/// ignored (set to 0). Throws AnalysisError if the Fourier mode is not an
/// invariant subspace of the linearized operator.
DispersionSample dispersion_measured(const ClosureSpec& spec, std::size_t k_index, const Mesh& mesh,
                                     const Operators& ops, const ModelParams& params);

}  // namespace splitfem
