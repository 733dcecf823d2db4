#include "splitfem/closures.hpp"

#include <algorithm>
#include <cmath>

#include "splitfem/errors.hpp"

namespace splitfem {

std::string_view to_string(ClosureKind kind) noexcept {
    switch (kind) {
        case ClosureKind::gp1: return "gp1";
        case ClosureKind::gp0: return "gp0";
        case ClosureKind::avg: return "avg";
    }
    return "?";
}

ClosureKind parse_closure_kind(std::string_view name) {
    if (name == "gp1") return ClosureKind::gp1;
    if (name == "gp0") return ClosureKind::gp0;
    if (name == "avg") return ClosureKind::avg;
    throw ValidationError("unknown closure kind '" + std::string(name) +
                          "' (expected gp1, gp0 or avg)");
}

std::string ClosureSpec::label() const {
    return std::string(to_string(velocity)) + "-" + std::string(to_string(height));
}

ClosureSpec ClosureSpec::parse(std::string_view label) {
    const auto dash = label.find('-');
    if (dash == std::string_view::npos)
        throw ValidationError("closure spec '" + std::string(label) +
                              "' must look like <velocity>-<height>, e.g. avg-avg");
    return ClosureSpec{parse_closure_kind(label.substr(dash + 1)),
                       parse_closure_kind(label.substr(0, dash))};
}

void ClosureSpec::validate_for(std::size_t n) const {
    if (uses(ClosureKind::gp0) && n % 2 == 0)
        throw ValidationError("closure " + label() + " uses gp0, which is singular for even n (n = " +
                              std::to_string(n) + "); use an odd number of elements");
}

void close_to_nodal(ClosureKind kind, const Mesh& mesh, const Operators& ops,
                    std::span<const double> c, std::span<double> out) {
    const std::size_t n = mesh.size();
    if (c.size() != n || out.size() != n) throw ValidationError("closure input has wrong size");
    switch (kind) {
        case ClosureKind::avg: {
            const auto& a = ops.average;
            out[0] = a.first[0] * c[n - 1] + a.second[0] * c[0];
            for (std::size_t l = 1; l < n; ++l) out[l] = a.first[l] * c[l - 1] + a.second[l] * c[l];
            return;
        }
        case ClosureKind::gp1: {
            // <x_h, phi_l> = <c_h, phi_l>: r_l = (dx[l-1] c[l-1] + dx[l] c[l]) / 2.
            const auto& m = ops.mass_en;
            out[0] = m.first[0] * c[n - 1] + m.second[0] * c[0];
            for (std::size_t l = 1; l < n; ++l) out[l] = m.first[l] * c[l - 1] + m.second[l] * c[l];
            ops.mass_nn_solver.solve(out, out);
            return;
        }
        case ClosureKind::gp0: {
            // <x_h, chi_e> = <c_h, chi_e>: dx[e] (x[e] + x[e+1]) / 2 = dx[e] c[e].
            thread_local std::vector<double> rhs, work;
            rhs.resize(n);
            work.resize(n);
            for (std::size_t e = 0; e < n; ++e) rhs[e] = mesh.dx(e) * c[e];
            solve_two_band(ops.mass_ne, rhs, out, work);
            return;
        }
    }
}

NodalField close_to_nodal(ClosureKind kind, const Mesh& mesh, const Operators& ops,
                          const ElementField& coeffs) {
    for (double x : coeffs)
        if (!std::isfinite(x)) throw ValidationError("closure input contains non-finite values");
    NodalField out(mesh.size());
    close_to_nodal(kind, mesh, ops, coeffs.values(), out.values());
    return out;
}

NodalState close_state(const ClosureSpec& spec, const Mesh& mesh, const Operators& ops,
                       const State& state) {
    spec.validate_for(mesh.size());
    return NodalState{close_to_nodal(spec.height, mesh, ops, state.h),
                      close_to_nodal(spec.velocity, mesh, ops, state.u),
                      close_to_nodal(spec.velocity, mesh, ops, state.v)};
}

}  // namespace splitfem
