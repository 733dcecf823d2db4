#include "splitfem/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "splitfem/dynamics.hpp"
#include "splitfem/errors.hpp"

namespace splitfem {

namespace {

// int_e a_h b_h dx for P1 fields a, b (gauss2 is exact for the quadratic).
double element_p1_product(const NodalField& a, const NodalField& b, const Mesh& mesh,
                          std::size_t e) {
    double s = 0.0;
    for (const auto& qp : gauss2(e, mesh)) {
        const double t = (qp.x - mesh.element_left(e)) / mesh.dx(e);
        s += qp.weight * p1_value(a, mesh, e, t) * p1_value(b, mesh, e, t);
    }
    return s;
}

double element_p1_integral(const NodalField& a, const Mesh& mesh, std::size_t e) {
    return 0.5 * mesh.dx(e) * (a[e] + a[mesh.next(e)]);
}

}  // namespace

EnergyTerms energy_terms(const State& state, const ClosureSpec& spec, const Mesh& mesh,
                         const Operators& ops, double g) {
    const auto nodal = close_state(spec, mesh, ops, state);
    EnergyTerms terms;
    for (std::size_t e = 0; e < mesh.size(); ++e) {
        terms.kinetic_u += 0.5 * state.u[e] * element_p1_product(nodal.h0, nodal.u0, mesh, e);
        terms.kinetic_v += 0.5 * state.v[e] * element_p1_product(nodal.h0, nodal.v0, mesh, e);
        terms.potential_pairing += g * state.h[e] * element_p1_integral(nodal.h0, mesh, e);
    }
    return terms;
}

double energy(const State& state, const ClosureSpec& spec, const Mesh& mesh, const Operators& ops,
              double g) {
    return energy_terms(state, spec, mesh, ops, g).energy();
}

double mass_e(const State& state, const Mesh& mesh) {
    double m = 0.0;
    for (std::size_t e = 0; e < mesh.size(); ++e) m += mesh.dx(e) * state.h[e];
    return m;
}

double mass_n(const NodalField& h0, const Mesh& mesh) {
    double m = 0.0;
    for (std::size_t l = 0; l < mesh.size(); ++l)
        m += 0.5 * (mesh.dx(mesh.prev(l)) + mesh.dx(l)) * h0[l];
    return m;
}

double mass_n(const State& state, const ClosureSpec& spec, const Mesh& mesh, const Operators& ops) {
    return mass_n(close_to_nodal(spec.height, mesh, ops, state.h), mesh);
}

double total_pv(const ElementField& h, const NodalField& q, const Mesh& mesh) {
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.size(); ++e) s += h[e] * element_p1_integral(q, mesh, e);
    return s;
}

double total_pv(const State& state, const NodalField& v0, double f, const Mesh& mesh,
                const Operators& ops) {
    return total_pv(state.h, diagnose_pv(state.h, v0, f, mesh, ops), mesh);
}

double enstrophy(const ElementField& h, const NodalField& q, const Mesh& mesh) {
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.size(); ++e) s += h[e] * element_p1_product(q, q, mesh, e);
    return s;
}

DiagnosticsRecord diagnose(const State& state, const ModelParams& params, const ClosureSpec& spec,
                           const Mesh& mesh, const Operators& ops, double t) {
    const auto nodal = close_state(spec, mesh, ops, state);
    const auto q = diagnose_pv(state.h, nodal.v0, params.f, mesh, ops);
    const auto terms = energy_terms(state, spec, mesh, ops, params.g);
    DiagnosticsRecord rec;
    rec.t = t;
    rec.energy = terms.energy();
    rec.energy_half_pe = terms.energy_half_pe();
    rec.mass_e = mass_e(state, mesh);
    rec.mass_n = mass_n(nodal.h0, mesh);
    rec.total_pv = total_pv(state.h, q, mesh);
    rec.enstrophy = enstrophy(state.h, q, mesh);
    return rec;
}

double l2_error(const NodalField& field, const ScalarFunction& reference, const Mesh& mesh) {
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.size(); ++e) {
        for (const auto& qp : gauss5(e, mesh)) {
            const double t = (qp.x - mesh.element_left(e)) / mesh.dx(e);
            const double d = p1_value(field, mesh, e, t) - reference(qp.x);
            s += qp.weight * d * d;
        }
    }
    return std::sqrt(s);
}

double l2_error(const ElementField& field, const ScalarFunction& reference, const Mesh& mesh) {
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.size(); ++e) {
        for (const auto& qp : gauss5(e, mesh)) {
            const double d = field[e] - reference(qp.x);
            s += qp.weight * d * d;
        }
    }
    return std::sqrt(s);
}

double dispersion_avg_analytic(double k, double g, double h_mean, double dx) {
    return std::sqrt(g * h_mean) * std::sin(k * dx) / dx;
}

DispersionSample dispersion_measured(const ClosureSpec& spec, std::size_t k_index, const Mesh& mesh,
                                     const Operators& ops, const ModelParams& params) {
    using cplx = std::complex<double>;
    const std::size_t n = mesh.size();
    const double dx = mesh.length() / static_cast<double>(n);
    for (std::size_t e = 0; e < n; ++e) {
        if (std::abs(mesh.dx(e) - dx) > 1e-12 * dx)
            throw ValidationError("dispersion measurement needs a uniform mesh");
    }
    ModelParams linear = params;
    linear.f = 0.0;
    TendencyEvaluator eval(mesh, ops, linear, spec);

    const double k = 2.0 * std::numbers::pi * static_cast<double>(k_index) / mesh.length();
    std::vector<cplx> mode(n);
    for (std::size_t e = 0; e < n; ++e) mode[e] = std::polar(1.0, k * (static_cast<double>(e) + 0.5) * dx);

    // The (u, h) subsystem at rest with f = 0 is exactly quadratic in the
    // perturbation, so a central difference recovers the linear part.
    const double eps = 1e-3 * linear.h_mean;
    State plus = State::zeros(n), minus = State::zeros(n);
    Tendency t_plus = Tendency::zeros(n), t_minus = Tendency::zeros(n);
    // Returns L applied to the real perturbation p placed in u (to_h = false) or h.
    auto apply_linear = [&](const std::vector<double>& p, bool to_h, std::vector<double>& du,
                            std::vector<double>& dh) {
        for (std::size_t e = 0; e < n; ++e) {
            plus.h[e] = linear.h_mean + (to_h ? eps * p[e] : 0.0);
            minus.h[e] = linear.h_mean - (to_h ? eps * p[e] : 0.0);
            plus.u[e] = to_h ? 0.0 : eps * p[e];
            minus.u[e] = to_h ? 0.0 : -eps * p[e];
        }
        eval(plus, t_plus);
        eval(minus, t_minus);
        du.resize(n);
        dh.resize(n);
        for (std::size_t e = 0; e < n; ++e) {
            du[e] = (t_plus.du[e] - t_minus.du[e]) / (2.0 * eps);
            dh[e] = (t_plus.dh[e] - t_minus.dh[e]) / (2.0 * eps);
        }
    };

    std::vector<double> re(n), im(n);
    for (std::size_t e = 0; e < n; ++e) {
        re[e] = mode[e].real();
        im[e] = mode[e].imag();
    }

    // symbol(a, b): component a of L applied to the mode placed in component b.
    cplx symbol[2][2];
    double residual = 0.0;
    double scale = 0.0;
    for (int b = 0; b < 2; ++b) {
        std::vector<double> du_re, dh_re, du_im, dh_im;
        apply_linear(re, b == 1, du_re, dh_re);
        apply_linear(im, b == 1, du_im, dh_im);
        for (int a = 0; a < 2; ++a) {
            const auto& out_re = a == 0 ? du_re : dh_re;
            const auto& out_im = a == 0 ? du_im : dh_im;
            cplx proj = 0.0;
            for (std::size_t e = 0; e < n; ++e) proj += std::conj(mode[e]) * cplx(out_re[e], out_im[e]);
            proj /= static_cast<double>(n);
            symbol[a][b] = proj;
            for (std::size_t e = 0; e < n; ++e) {
                const cplx r = cplx(out_re[e], out_im[e]) - proj * mode[e];
                residual = std::max(residual, std::abs(r));
                scale = std::max(scale, std::abs(cplx(out_re[e], out_im[e])));
            }
        }
    }
    const double symbol_scale = std::max(linear.g, linear.h_mean) / dx;
    if (residual > 1e-8 * std::max(scale, symbol_scale)) {
        std::ostringstream msg;
        msg << "Fourier mode k_index=" << k_index << " is not invariant under the linearized "
            << spec.label() << " operator (residual " << residual << ")";
        throw AnalysisError(msg.str(), residual);
    }

    const cplx tr = symbol[0][0] + symbol[1][1];
    const cplx det = symbol[0][0] * symbol[1][1] - symbol[0][1] * symbol[1][0];
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc);
    const cplx l2 = 0.5 * (tr - disc);
    const double omega = std::max(std::abs(l1.imag()), std::abs(l2.imag()));
    return DispersionSample{k, omega, spec.label()};
}

}  // namespace splitfem
