#include "splitfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitfem/errors.hpp"

namespace splitfem {

Mesh::Mesh(std::vector<double> node_x, double length) : node_x_(std::move(node_x)), length_(length) {
    const std::size_t n = node_x_.size();
    dx_.resize(n);
    for (std::size_t e = 0; e + 1 < n; ++e) dx_[e] = node_x_[e + 1] - node_x_[e];
    dx_[n - 1] = node_x_[0] + length_ - node_x_[n - 1];
}

Mesh Mesh::uniform(std::size_t n, double length) {
    if (n < 3) throw ValidationError("mesh needs at least 3 elements, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ValidationError("mesh length must be positive and finite");
    std::vector<double> x(n);
    const double h = length / static_cast<double>(n);
    for (std::size_t l = 0; l < n; ++l) x[l] = h * static_cast<double>(l);
    Mesh mesh(std::move(x), length);
    // Uniform widths exactly, so that sum(dx) does not pick up seam rounding.
    std::fill(mesh.dx_.begin(), mesh.dx_.end(), h);
    return mesh;
}

Mesh Mesh::from_nodes(std::vector<double> node_x, double length) {
    if (node_x.size() < 3)
        throw ValidationError("mesh needs at least 3 nodes, got " + std::to_string(node_x.size()));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ValidationError("mesh length must be positive and finite");
    if (node_x.front() < 0.0 || node_x.back() >= length)
        throw ValidationError("node coordinates must lie in [0, length)");
    for (std::size_t l = 0; l + 1 < node_x.size(); ++l) {
        if (!(node_x[l + 1] > node_x[l]))
            throw ValidationError("node coordinates must be strictly increasing (at node " +
                                  std::to_string(l + 1) + ")");
    }
    return Mesh(std::move(node_x), length);
}

double Mesh::min_dx() const noexcept { return *std::min_element(dx_.begin(), dx_.end()); }

std::size_t Mesh::locate(double x) const {
    double y = std::fmod(x, length_);
    if (y < 0.0) y += length_;
    auto it = std::upper_bound(node_x_.begin(), node_x_.end(), y);
    if (it == node_x_.begin()) return size() - 1;  // before node 0: last element wraps
    return static_cast<std::size_t>(it - node_x_.begin()) - 1;
}

double Mesh::hat(std::size_t l, double x) const {
    const std::size_t e = locate(x);
    double y = std::fmod(x, length_);
    if (y < 0.0) y += length_;
    double s = y - node_x_[e];
    if (s < 0.0) s += length_;
    const double t = s / dx_[e];
    if (e == l) return 1.0 - t;
    if (next(e) == l) return t;
    return 0.0;
}

bool State::all_finite() const noexcept {
    auto finite = [](const ElementField& f) {
        return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
    };
    return finite(u) && finite(v) && finite(h);
}

void advance(const State& base, double scale, const Tendency& k, State& out) {
    const std::size_t n = base.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = base.u[i] + scale * k.du[i];
        out.v[i] = base.v[i] + scale * k.dv[i];
        out.h[i] = base.h[i] + scale * k.dh[i];
    }
}

void ModelParams::validate() const {
    if (!(g > 0.0)) throw ValidationError("g must be positive");
    if (!(h_mean > 0.0)) throw ValidationError("h_mean must be positive");
    if (!std::isfinite(f)) throw ValidationError("f must be finite");
}

double ModelParams::wave_speed() const { return std::sqrt(g * h_mean); }

std::array<QuadPoint, 2> gauss2(std::size_t e, const Mesh& mesh) {
    const double a = mesh.element_left(e);
    const double w = mesh.dx(e);
    const double off = 0.5 / std::sqrt(3.0);
    return {QuadPoint{a + w * (0.5 - off), 0.5 * w}, QuadPoint{a + w * (0.5 + off), 0.5 * w}};
}

std::array<QuadPoint, 5> gauss5(std::size_t e, const Mesh& mesh) {
    // Gauss-Legendre on [-1, 1].
    static constexpr double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                       0.5384693101056831, 0.9061798459386640};
    static constexpr double weight[5] = {0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};
    const double a = mesh.element_left(e);
    const double w = mesh.dx(e);
    std::array<QuadPoint, 5> q{};
    for (int i = 0; i < 5; ++i) q[i] = {a + 0.5 * w * (1.0 + node[i]), 0.5 * w * weight[i]};
    return q;
}

}  // namespace splitfem
