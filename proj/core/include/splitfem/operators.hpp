#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "splitfem/mesh.hpp"

namespace splitfem {

/// Cyclic tridiagonal matrix. Row i reads
///   lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1]   (indices mod n).
struct TridiagCirculant {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const noexcept { return diag.size(); }
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;
};

struct DiagonalMatrix {
    std::vector<double> diag;

    std::size_t size() const noexcept { return diag.size(); }
    std::vector<double> apply(std::span<const double> x) const;
};

/// n x n matrix with exactly two nonzeros per row. Row i has
///   first[i] at column (i + first_offset) mod n and
///   second[i] at column (i + second_offset) mod n.
/// Element-by-node and node-by-element operators (M^en, M^ne, G, P, A) all
/// use this layout. Assembly routines and transpose() keep
/// first_offset < second_offset.
struct TwoBandCirculant {
    int first_offset = 0;
    int second_offset = 1;
    std::vector<double> first;
    std::vector<double> second;

    std::size_t size() const noexcept { return first.size(); }
    std::size_t column(std::size_t row, int offset) const noexcept;
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;
    TwoBandCirculant transpose() const;
    /// Row-major dense copy (tests and oracles).
    std::vector<double> dense() const;
};

/// M^nn: P1 mass matrix. Row l: dx[l-1]/6, (dx[l-1]+dx[l])/3, dx[l]/6.
TridiagCirculant assemble_mass_nn(const Mesh& mesh);

/// M^ee: P0 mass matrix, diag[e] = dx[e].
DiagonalMatrix assemble_mass_ee(const Mesh& mesh);

/// M^en in node-row form: row l holds dx[l-1]/2 (element l-1) and dx[l]/2
/// (element l). With element_rows = true returns M^ne = (M^en)^T instead:
/// row e holds dx[e]/2 on nodes e and e+1.
TwoBandCirculant assemble_mass_en(const Mesh& mesh, bool element_rows = false);

/// Metric-free incidence matrix G in element-row form: (G x)[e] = x[e+1] - x[e].
TwoBandCirculant assemble_deriv_en(const Mesh& mesh);

/// Metric-free averaging part of M^ne = P^ne diag(dx): element-row form with
/// 1/2 on nodes e and e+1.
TwoBandCirculant averaging_ne(const Mesh& mesh);

enum class AveragingWeights {
    equal,   ///< node value = plain mean of the two adjacent element coefficients
    length,  ///< length-weighted mean (only differs on non-uniform meshes)
};

/// A^en = (P^ne)^T in node-row form: node l averages the coefficients of
/// elements l-1 and l. Acts on coefficient arrays, so constants map to
/// the same constants.
TwoBandCirculant averaging_en(const Mesh& mesh, AveragingWeights weights = AveragingWeights::equal);

/// Solve A x = b for a cyclic tridiagonal A (Sherman-Morrison + Thomas).
/// Throws SingularMatrixError carrying the smallest diagonal-dominance ratio.
std::vector<double> solve_tridiag_circulant(const TridiagCirculant& a, std::span<const double> b);

/// Factorization of a cyclic tridiagonal matrix reusable across right-hand sides.
class CyclicTridiagSolver {
public:
    CyclicTridiagSolver() = default;
    explicit CyclicTridiagSolver(const TridiagCirculant& a);

    /// Refactor in place, reusing storage.
    void factor(const TridiagCirculant& a);
    void factor(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper);

    /// Solve into x; b and x may alias.
    void solve(std::span<const double> b, std::span<double> x) const;
    std::vector<double> solve(std::span<const double> b) const;

    std::size_t size() const noexcept { return inv_denom_.size(); }

private:
    void thomas(std::span<const double> b, std::span<double> x) const;

    std::vector<double> lower_;      // modified system's sub-diagonal
    std::vector<double> c_prime_;    // forward-sweep upper multipliers
    std::vector<double> inv_denom_;  // forward-sweep reciprocal pivots
    std::vector<double> z_;          // T^{-1} u for the rank-one correction
    double v_last_ = 0.0;            // v = (1, 0, ..., 0, v_last)
    double inv_one_plus_vz_ = 0.0;
};

/// One-shot solve of a cyclic tridiagonal system without keeping the
/// factorization: one forward and one backward sweep. Intended for strictly
/// diagonally dominant matrices, so no pivot checks are made during the
/// sweeps; a non-finite result throws SingularMatrixError. `work` must hold
/// 2n doubles. b and x may alias.
void solve_cyclic_tridiag_once(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<const double> b,
                               std::span<double> x, std::span<double> work);

/// Solve a cyclic two-band system with adjacent band columns. Invertible iff
/// the product of -first[i]/second[i] around the cycle differs from 1; for
/// equal bands this means n odd. Throws SingularMatrixError otherwise.
std::vector<double> solve_two_band(const TwoBandCirculant& a, std::span<const double> b);

/// Allocation-free variant; `work` holds n doubles. b and x must not alias.
void solve_two_band(const TwoBandCirculant& a, std::span<const double> b, std::span<double> x,
                    std::span<double> work);

/// Number of linear solves performed by the calling thread so far.
/// Incremented by every solver entry point in this header.
long linear_solve_count() noexcept;

/// The metric-dependent operators of a mesh, assembled once.
struct Operators {
    explicit Operators(const Mesh& mesh);

    TridiagCirculant mass_nn;
    DiagonalMatrix mass_ee;
    TwoBandCirculant mass_en;  ///< node rows
    TwoBandCirculant mass_ne;  ///< element rows
    TwoBandCirculant deriv;    ///< element rows
    TwoBandCirculant average;  ///< A^en, node rows
    CyclicTridiagSolver mass_nn_solver;
};

}  // namespace splitfem
