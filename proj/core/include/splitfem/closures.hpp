#pragma once

#include <string>
#include <string_view>

#include "splitfem/mesh.hpp"
#include "splitfem/operators.hpp"

namespace splitfem {

/// Realization of the discrete Hodge star taking P0 (1-form) coefficients to
/// P1 (0-form) nodal values.
enum class ClosureKind {
    gp1,  ///< Galerkin projection tested against P1 hats (tridiagonal solve)
    gp0,  ///< Galerkin projection tested against P0 boxes (two-band solve, odd n only)
    avg,  ///< two-point mean of adjacent element coefficients, no solve
};

std::string_view to_string(ClosureKind kind) noexcept;
/// Parses "gp1", "gp0" or "avg". Throws ValidationError otherwise.
ClosureKind parse_closure_kind(std::string_view name);

/// Closure used for the height and for both velocities.
struct ClosureSpec {
    ClosureKind height = ClosureKind::avg;
    ClosureKind velocity = ClosureKind::avg;

    /// "<velocity>-<height>", e.g. "gp1-gp0" is GP1 for u, v and GP0 for h.
    std::string label() const;
    /// Inverse of label().
    static ClosureSpec parse(std::string_view label);
    bool uses(ClosureKind kind) const noexcept { return height == kind || velocity == kind; }
    /// Throws ValidationError if this closure pair cannot be realized on a mesh of n elements.
    void validate_for(std::size_t n) const;

    bool operator==(const ClosureSpec&) const = default;
};

/// Map element coefficients to nodal values with the given closure.
NodalField close_to_nodal(ClosureKind kind, const Mesh& mesh, const Operators& ops,
                          const ElementField& coeffs);

/// Variant writing into `out` (sized n, not aliasing `coeffs`). gp0 keeps
/// per-thread scratch buffers; nothing allocates once they have grown to n.
void close_to_nodal(ClosureKind kind, const Mesh& mesh, const Operators& ops,
                    std::span<const double> coeffs, std::span<double> out);

struct NodalState {
    NodalField h0;
    NodalField u0;
    NodalField v0;
};

/// Apply spec.height to h and spec.velocity to u and v.
NodalState close_state(const ClosureSpec& spec, const Mesh& mesh, const Operators& ops,
                       const State& state);

}  // namespace splitfem
