#include "splitfem/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "splitfem/errors.hpp"

namespace splitfem {

namespace {

thread_local long g_linear_solves = 0;

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}

double dominance_ratio(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper) {
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double off = std::abs(lower[i]) + std::abs(upper[i]);
        if (off > 0.0) ratio = std::min(ratio, std::abs(diag[i]) / off);
    }
    return ratio;
}

}  // namespace

long linear_solve_count() noexcept { return g_linear_solves; }

void TridiagCirculant::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = i == 0 ? n - 1 : i - 1;
        const std::size_t ip = i + 1 == n ? 0 : i + 1;
        y[i] = lower[i] * x[im] + diag[i] * x[i] + upper[i] * x[ip];
    }
}

std::vector<double> TridiagCirculant::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    apply(x, y);
    return y;
}

std::vector<double> DiagonalMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    for (std::size_t i = 0; i < size(); ++i) y[i] = diag[i] * x[i];
    return y;
}

std::size_t TwoBandCirculant::column(std::size_t row, int offset) const noexcept {
    return wrap(static_cast<std::ptrdiff_t>(row) + offset, size());
}

void TwoBandCirculant::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
        y[i] = first[i] * x[column(i, first_offset)] + second[i] * x[column(i, second_offset)];
}

std::vector<double> TwoBandCirculant::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    apply(x, y);
    return y;
}

TwoBandCirculant TwoBandCirculant::transpose() const {
    // Entry (i, i + off) becomes (j, j - off) with j = i + off.
    const std::size_t n = size();
    TwoBandCirculant t;
    t.first_offset = -first_offset;
    t.second_offset = -second_offset;
    t.first.resize(n);
    t.second.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        t.first[j] = first[column(j, -first_offset)];
        t.second[j] = second[column(j, -second_offset)];
    }
    // Keep bands ordered by column offset.
    if (t.first_offset > t.second_offset) {
        std::swap(t.first_offset, t.second_offset);
        std::swap(t.first, t.second);
    }
    return t;
}

std::vector<double> TwoBandCirculant::dense() const {
    const std::size_t n = size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m[i * n + column(i, first_offset)] += first[i];
        m[i * n + column(i, second_offset)] += second[i];
    }
    return m;
}

TridiagCirculant assemble_mass_nn(const Mesh& mesh) {
    const std::size_t n = mesh.size();
    TridiagCirculant m{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t l = 0; l < n; ++l) {
        const double left = mesh.dx(mesh.prev(l));
        const double right = mesh.dx(l);
        m.lower[l] = left / 6.0;
        m.diag[l] = (left + right) / 3.0;
        m.upper[l] = right / 6.0;
    }
    return m;
}

DiagonalMatrix assemble_mass_ee(const Mesh& mesh) {
    auto dx = mesh.dx();
    return DiagonalMatrix{std::vector<double>(dx.begin(), dx.end())};
}

TwoBandCirculant assemble_mass_en(const Mesh& mesh, bool element_rows) {
    const std::size_t n = mesh.size();
    TwoBandCirculant m;
    m.first_offset = -1;
    m.second_offset = 0;
    m.first.resize(n);
    m.second.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        m.first[l] = 0.5 * mesh.dx(mesh.prev(l));
        m.second[l] = 0.5 * mesh.dx(l);
    }
    return element_rows ? m.transpose() : m;
}

TwoBandCirculant assemble_deriv_en(const Mesh& mesh) {
    const std::size_t n = mesh.size();
    return TwoBandCirculant{0, 1, std::vector<double>(n, -1.0), std::vector<double>(n, 1.0)};
}

TwoBandCirculant averaging_ne(const Mesh& mesh) {
    const std::size_t n = mesh.size();
    return TwoBandCirculant{0, 1, std::vector<double>(n, 0.5), std::vector<double>(n, 0.5)};
}

TwoBandCirculant averaging_en(const Mesh& mesh, AveragingWeights weights) {
    TwoBandCirculant a = averaging_ne(mesh).transpose();
    if (weights == AveragingWeights::length) {
        for (std::size_t l = 0; l < mesh.size(); ++l) {
            const double left = mesh.dx(mesh.prev(l));
            const double right = mesh.dx(l);
            a.first[l] = left / (left + right);
            a.second[l] = right / (left + right);
        }
    }
    return a;
}

CyclicTridiagSolver::CyclicTridiagSolver(const TridiagCirculant& a) { factor(a); }

void CyclicTridiagSolver::factor(const TridiagCirculant& a) { factor(a.lower, a.diag, a.upper); }

void CyclicTridiagSolver::factor(std::span<const double> lower, std::span<const double> diag,
                                 std::span<const double> upper) {
    const std::size_t n = diag.size();
    if (n < 3) throw ValidationError("cyclic tridiagonal solver needs n >= 3");
    lower_.assign(lower.begin(), lower.end());
    c_prime_.resize(n);
    inv_denom_.resize(n);
    z_.resize(n);

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(lower[i]) + std::abs(diag[i]) + std::abs(upper[i]));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw SingularMatrixError("cyclic tridiagonal matrix is zero or non-finite", 0.0);
    const double tiny = 1e-14 * scale;

    // A = T + u v^T with u = (gamma, 0, .., 0, upper[n-1]), v = (1, 0, .., 0, lower[0]/gamma).
    const double gamma = -diag[0];
    if (std::abs(gamma) <= tiny)
        throw SingularMatrixError("cyclic tridiagonal matrix has a vanishing first pivot",
                                  dominance_ratio(lower, diag, upper));
    v_last_ = lower[0] / gamma;

    double denom = diag[0] - gamma;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            double d = diag[i] - lower[i] * c_prime_[i - 1];
            if (i == n - 1) d -= upper[n - 1] * lower[0] / gamma;
            denom = d;
        }
        if (std::abs(denom) <= tiny || !std::isfinite(denom)) {
            std::ostringstream msg;
            msg << "cyclic tridiagonal matrix is numerically singular (pivot " << denom << " at row "
                << i << ", diagonal dominance ratio " << dominance_ratio(lower, diag, upper) << ")";
            throw SingularMatrixError(msg.str(), dominance_ratio(lower, diag, upper));
        }
        inv_denom_[i] = 1.0 / denom;
        c_prime_[i] = (i + 1 < n ? upper[i] : 0.0) * inv_denom_[i];
    }
    // Modified system drops the corner couplings.
    lower_[0] = 0.0;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = upper[n - 1];
    thomas(u, z_);
    const double one_plus_vz = 1.0 + z_[0] + v_last_ * z_[n - 1];
    if (std::abs(one_plus_vz) <= 1e-14 || !std::isfinite(one_plus_vz)) {
        std::ostringstream msg;
        msg << "cyclic tridiagonal matrix is singular (rank-one correction denominator "
            << one_plus_vz << ", diagonal dominance ratio " << dominance_ratio(lower, diag, upper)
            << ")";
        throw SingularMatrixError(msg.str(), dominance_ratio(lower, diag, upper));
    }
    inv_one_plus_vz_ = 1.0 / one_plus_vz;
}

void CyclicTridiagSolver::thomas(std::span<const double> b, std::span<double> x) const {
    const std::size_t n = inv_denom_.size();
    x[0] = b[0] * inv_denom_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (b[i] - lower_[i] * x[i - 1]) * inv_denom_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime_[i] * x[i + 1];
}

void CyclicTridiagSolver::solve(std::span<const double> b, std::span<double> x) const {
    ++g_linear_solves;
    const std::size_t n = inv_denom_.size();
    thomas(b, x);
    const double factor = (x[0] + v_last_ * x[n - 1]) * inv_one_plus_vz_;
    for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z_[i];
}

std::vector<double> CyclicTridiagSolver::solve(std::span<const double> b) const {
    std::vector<double> x(b.size());
    solve(b, x);
    return x;
}

std::vector<double> solve_tridiag_circulant(const TridiagCirculant& a, std::span<const double> b) {
    if (b.size() != a.size()) throw ValidationError("right-hand side size does not match matrix");
    return CyclicTridiagSolver(a).solve(b);
}

void solve_cyclic_tridiag_once(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<const double> b,
                               std::span<double> x, std::span<double> work) {
    const std::size_t n = diag.size();
    if (n < 3) throw ValidationError("cyclic tridiagonal solver needs n >= 3");
    if (lower.size() != n || upper.size() != n || b.size() != n || x.size() != n || work.size() < 2 * n)
        throw ValidationError("cyclic tridiagonal solve: size mismatch");
    ++g_linear_solves;
    double* cp = work.data();
    double* z = work.data() + n;

    // Same rank-one splitting as CyclicTridiagSolver, with the factorization,
    // the correction vector and the right-hand side swept together.
    const double gamma = -diag[0];
    const double v_last = lower[0] / gamma;
    double inv = 1.0 / (diag[0] - gamma);
    cp[0] = upper[0] * inv;
    x[0] = b[0] * inv;
    z[0] = gamma * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        inv = 1.0 / (diag[i] - lower[i] * cp[i - 1]);
        cp[i] = upper[i] * inv;
        x[i] = (b[i] - lower[i] * x[i - 1]) * inv;
        z[i] = -lower[i] * z[i - 1] * inv;
    }
    const std::size_t m = n - 1;
    inv = 1.0 / (diag[m] - lower[m] * cp[m - 1] - upper[m] * v_last);
    x[m] = (b[m] - lower[m] * x[m - 1]) * inv;
    z[m] = (upper[m] - lower[m] * z[m - 1]) * inv;
    for (std::size_t i = m; i-- > 0;) {
        x[i] -= cp[i] * x[i + 1];
        z[i] -= cp[i] * z[i + 1];
    }
    const double factor = (x[0] + v_last * x[m]) / (1.0 + z[0] + v_last * z[m]);
    bool finite = std::isfinite(factor);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] -= factor * z[i];
        finite &= std::isfinite(x[i]);
    }
    if (!finite)
        throw SingularMatrixError("cyclic tridiagonal solve produced non-finite values (diagonal dominance ratio " +
                                      std::to_string(dominance_ratio(lower, diag, upper)) + ")",
                                  dominance_ratio(lower, diag, upper));
}

void solve_two_band(const TwoBandCirculant& a, std::span<const double> b, std::span<double> x,
                    std::span<double> work) {
    const std::size_t n = a.size();
    if (b.size() != n || x.size() != n || work.size() < n)
        throw ValidationError("two-band solve: size mismatch");
    const int step = a.second_offset - a.first_offset;
    if (step != 1 && step != -1)
        throw ValidationError("two-band solver needs bands on adjacent columns");
    ++g_linear_solves;

    // Row r couples x[p] (first band) with x[p + step], p = r + first_offset.
    // Walk the cycle carrying x[p] = alpha[p] + beta[p] * x[0], with alpha
    // kept in x and beta in work.
    const auto advance = [n, step](std::size_t i) {
        if (step == 1) return i + 1 == n ? std::size_t{0} : i + 1;
        return i == 0 ? n - 1 : i - 1;
    };
    std::size_t p = 0;
    std::size_t r = wrap(-static_cast<std::ptrdiff_t>(a.first_offset), n);
    double alpha_p = 0.0, beta_p = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (a.second[r] == 0.0)
            throw SingularMatrixError("two-band matrix has a zero band entry at row " + std::to_string(r), 0.0);
        const double inv = 1.0 / a.second[r];
        alpha_p = (b[r] - a.first[r] * alpha_p) * inv;
        beta_p = -a.first[r] * beta_p * inv;
        p = advance(p);
        r = advance(r);
        if (p != 0) {
            x[p] = alpha_p;
            work[p] = beta_p;
        }
    }
    // Back at x[0]: x0 = alpha + beta x0.
    const double det = 1.0 - beta_p;
    if (std::abs(det) <= 1e-12) {
        std::ostringstream msg;
        msg << "cyclic two-band matrix is singular (1 - prod(-first/second) = " << det << ")";
        if (n % 2 == 0) msg << "; the alternating vector (+1, -1, +1, ..., -1) is a null vector";
        throw SingularMatrixError(msg.str(), std::abs(det));
    }
    const double x0 = alpha_p / det;
    x[0] = x0;
    for (std::size_t i = 1; i < n; ++i) x[i] += work[i] * x0;
}

std::vector<double> solve_two_band(const TwoBandCirculant& a, std::span<const double> b) {
    std::vector<double> x(a.size()), work(a.size());
    solve_two_band(a, b, x, work);
    return x;
}

Operators::Operators(const Mesh& mesh)
    : mass_nn(assemble_mass_nn(mesh)),
      mass_ee(assemble_mass_ee(mesh)),
      mass_en(assemble_mass_en(mesh)),
      mass_ne(assemble_mass_en(mesh, true)),
      deriv(assemble_deriv_en(mesh)),
      average(averaging_en(mesh)),
      mass_nn_solver(mass_nn) {}

}  // namespace splitfem
