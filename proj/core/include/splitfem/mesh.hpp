#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace splitfem {

/// Periodic 1D mesh on [0, L).
///
/// Node l is the left endpoint of element l; element e spans the nodes
/// (e, e+1 mod n). Under periodicity there are as many nodes as elements.
class Mesh {
public:
    /// Uniform mesh with n elements of width length/n.
    static Mesh uniform(std::size_t n, double length);

    /// Non-uniform mesh from strictly increasing node coordinates in [0, length).
    static Mesh from_nodes(std::vector<double> node_x, double length);

    std::size_t size() const noexcept { return node_x_.size(); }
    double length() const noexcept { return length_; }

    std::span<const double> node_x() const noexcept { return node_x_; }
    std::span<const double> dx() const noexcept { return dx_; }
    double node_x(std::size_t l) const { return node_x_[l]; }
    double dx(std::size_t e) const { return dx_[e]; }
    double min_dx() const noexcept;

    /// Left endpoint of element e (equal to node_x(e)).
    double element_left(std::size_t e) const { return node_x_[e]; }

    std::size_t next(std::size_t i) const noexcept { return i + 1 == size() ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const noexcept { return i == 0 ? size() - 1 : i - 1; }

    /// Element containing x (x is wrapped into [0, L) first).
    std::size_t locate(double x) const;

    /// Value of the P1 hat function of node l at x.
    double hat(std::size_t l, double x) const;

private:
    Mesh(std::vector<double> node_x, double length);

    std::vector<double> node_x_;
    std::vector<double> dx_;
    double length_ = 0.0;
};

/// Coefficient array with one entry per element (Tag = ElementTag) or per
/// node (Tag = NodeTag). The two are deliberately distinct types.
template <class Tag>
class Field {
public:
    Field() = default;
    explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit Field(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool operator==(const Field&) const = default;

private:
    std::vector<double> values_;
};

struct ElementTag;
struct NodeTag;

/// P0 coefficients, one per element. Prognostic 1-forms are stored by their
/// coefficient arrays; the integrated 1-form is M_ee times the array.
using ElementField = Field<ElementTag>;

/// P1 nodal coefficients, one per node.
using NodalField = Field<NodeTag>;

/// Prognostic variables: coefficient arrays of u (straight 1-form),
/// v (twisted 1-form) and h (twisted 1-form).
struct State {
    ElementField u;
    ElementField v;
    ElementField h;

    static State zeros(std::size_t n) { return {ElementField(n), ElementField(n), ElementField(n)}; }
    std::size_t size() const noexcept { return h.size(); }
    bool all_finite() const noexcept;
    bool operator==(const State&) const = default;
};

/// Time derivatives of the State coefficient arrays.
struct Tendency {
    ElementField du;
    ElementField dv;
    ElementField dh;

    static Tendency zeros(std::size_t n) { return {ElementField(n), ElementField(n), ElementField(n)}; }
    std::size_t size() const noexcept { return dh.size(); }
};

/// out = base + scale * k, componentwise.
void advance(const State& base, double scale, const Tendency& k, State& out);

struct ModelParams {
    double g = 1.0;       ///< gravitational constant, > 0
    double f = 0.0;       ///< Coriolis parameter
    double h_mean = 1.0;  ///< reference height H, > 0

    void validate() const;
    double wave_speed() const;  ///< sqrt(g H)
    bool operator==(const ModelParams&) const = default;
};

struct QuadPoint {
    double x;
    double weight;
};

/// Two-point Gauss-Legendre rule mapped onto element e. Exact for cubics.
std::array<QuadPoint, 2> gauss2(std::size_t e, const Mesh& mesh);

/// Five-point Gauss-Legendre rule mapped onto element e. Exact to degree 9.
std::array<QuadPoint, 5> gauss5(std::size_t e, const Mesh& mesh);

/// Value of the P1 function with the given nodal coefficients at the local
/// coordinate t in [0, 1] of element e.
inline double p1_value(const NodalField& c, const Mesh& mesh, std::size_t e, double t) {
    return (1.0 - t) * c[e] + t * c[mesh.next(e)];
}

}  // namespace splitfem
