#include "splitfem/dynamics.hpp"

#include <cmath>
#include <string>

#include "splitfem/errors.hpp"

namespace splitfem {

namespace {

void check_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw ValidationError("nodal fields have mismatched lengths");
}

void check_positive_height(std::span<const double> h) {
    for (std::size_t e = 0; e < h.size(); ++e) {
        if (!(h[e] > 0.0))
            throw ValidationError("height must be positive for PV diagnosis; h[" + std::to_string(e) +
                                  "] = " + std::to_string(h[e]));
    }
}

void fill_pv_matrix(std::span<const double> h, const Mesh& mesh, std::span<double> lower,
                    std::span<double> diag, std::span<double> upper) {
    const std::size_t n = mesh.size();
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t em = mesh.prev(l);
        const double left = h[em] * mesh.dx(em);
        const double right = h[l] * mesh.dx(l);
        lower[l] = left / 6.0;
        diag[l] = (left + right) / 3.0;
        upper[l] = right / 6.0;
    }
}

// <phi_l, d v0> = (v0[l+1] - v0[l-1]) / 2 on any mesh; f int phi_l = f (dx[l-1] + dx[l]) / 2.
void fill_pv_rhs(std::span<const double> v0, double f, const Mesh& mesh, std::span<double> r) {
    const std::size_t n = mesh.size();
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t lm = mesh.prev(l);
        const std::size_t lp = mesh.next(l);
        r[l] = 0.5 * (v0[lp] - v0[lm]) + 0.5 * f * (mesh.dx(lm) + mesh.dx(l));
    }
}

}  // namespace

std::pair<NodalField, NodalField> mass_fluxes(const NodalField& h0, const NodalField& u0,
                                              const NodalField& v0) {
    check_same_size(h0.size(), u0.size());
    check_same_size(h0.size(), v0.size());
    NodalField fu(h0.size()), fv(h0.size());
    for (std::size_t l = 0; l < h0.size(); ++l) {
        fu[l] = h0[l] * u0[l];
        fv[l] = h0[l] * v0[l];
    }
    return {std::move(fu), std::move(fv)};
}

NodalField bernoulli(const NodalField& h0, const NodalField& u0, const NodalField& v0, double g) {
    check_same_size(h0.size(), u0.size());
    check_same_size(h0.size(), v0.size());
    NodalField b(h0.size());
    for (std::size_t l = 0; l < h0.size(); ++l)
        b[l] = 0.5 * u0[l] * u0[l] + 0.5 * v0[l] * v0[l] + g * h0[l];
    return b;
}

TridiagCirculant assemble_pv_matrix(const ElementField& h, const Mesh& mesh) {
    const std::size_t n = mesh.size();
    TridiagCirculant w{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    fill_pv_matrix(h.values(), mesh, w.lower, w.diag, w.upper);
    return w;
}

std::vector<double> pv_rhs(const NodalField& v0, double f, const Mesh& mesh) {
    std::vector<double> r(mesh.size());
    fill_pv_rhs(v0.values(), f, mesh, r);
    return r;
}

NodalField diagnose_pv(const ElementField& h, const NodalField& v0, double f, const Mesh& mesh,
                       const Operators& /*ops*/) {
    check_same_size(h.size(), mesh.size());
    check_same_size(v0.size(), mesh.size());
    check_positive_height(h.values());
    const auto w = assemble_pv_matrix(h, mesh);
    return NodalField(solve_tridiag_circulant(w, pv_rhs(v0, f, mesh)));
}

Tendency rhs(const State& state, const ModelParams& params, const ClosureSpec& spec,
             const Mesh& mesh, const Operators& ops) {
    params.validate();
    spec.validate_for(mesh.size());
    if (state.size() != mesh.size()) throw ValidationError("state size does not match mesh");
    TendencyEvaluator eval(mesh, ops, params, spec);
    Tendency out = Tendency::zeros(mesh.size());
    eval(state, out);
    return out;
}

TendencyEvaluator::TendencyEvaluator(const Mesh& mesh, const Operators& ops,
                                     const ModelParams& params, const ClosureSpec& spec)
    : mesh_(&mesh), ops_(&ops), params_(params), spec_(spec) {
    params_.validate();
    spec_.validate_for(mesh.size());
    const std::size_t n = mesh.size();
    for (auto* buf : {&h0_, &u0_, &v0_, &q_, &flux_u_, &flux_v_, &bern_, &w_lower_, &w_diag_,
                      &w_upper_})
        buf->assign(n, 0.0);
    pv_work_.assign(2 * n, 0.0);
    inv_dx_.resize(n);
    for (std::size_t e = 0; e < n; ++e) inv_dx_[e] = 1.0 / mesh.dx(e);
}

void TendencyEvaluator::close(const State& state) {
    close_to_nodal(spec_.height, *mesh_, *ops_, state.h.values(), h0_);
    close_to_nodal(spec_.velocity, *mesh_, *ops_, state.u.values(), u0_);
    close_to_nodal(spec_.velocity, *mesh_, *ops_, state.v.values(), v0_);
}

void TendencyEvaluator::diagnose_pv(const ElementField& h) {
    // 6 W(h) q = 6 r, assembled without divisions.
    const std::size_t n = mesh_->size();
    const auto dx = mesh_->dx();
    const double three_f = 3.0 * params_.f;
    bool positive = true;
    double left = h[n - 1] * dx[n - 1];
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t lm = l == 0 ? n - 1 : l - 1;
        const std::size_t lp = l + 1 == n ? 0 : l + 1;
        positive &= h[l] > 0.0;
        const double right = h[l] * dx[l];
        w_lower_[l] = left;
        w_diag_[l] = 2.0 * (left + right);
        w_upper_[l] = right;
        q_[l] = 3.0 * (v0_[lp] - v0_[lm]) + three_f * (dx[lm] + dx[l]);
        left = right;
    }
    if (!positive) check_positive_height(h.values());
    solve_cyclic_tridiag_once(w_lower_, w_diag_, w_upper_, q_, q_, pv_work_);
}

void TendencyEvaluator::operator()(const State& state, Tendency& out) {
    const std::size_t n = mesh_->size();
    close(state);
    diagnose_pv(state.h);

    const double g = params_.g;
    for (std::size_t l = 0; l < n; ++l) {
        flux_u_[l] = h0_[l] * u0_[l];
        flux_v_[l] = h0_[l] * v0_[l];
        bern_[l] = 0.5 * u0_[l] * u0_[l] + 0.5 * v0_[l] * v0_[l] + g * h0_[l];
    }

    // Element rows of G (-1, +1) and M^ne (dx/2, dx/2) on nodes e and e+1;
    // dividing by dx[e] applies M_ee^{-1}.
    const auto& mne = ops_->mass_ne;
    for (std::size_t e = 0; e < n; ++e) {
        const std::size_t ep = e + 1 == n ? 0 : e + 1;
        const double inv_dx = inv_dx_[e];
        const double grad_b = bern_[ep] - bern_[e];
        const double grad_fu = flux_u_[ep] - flux_u_[e];
        const double pv_flux_v = mne.first[e] * q_[e] * flux_v_[e] + mne.second[e] * q_[ep] * flux_v_[ep];
        const double pv_flux_u = mne.first[e] * q_[e] * flux_u_[e] + mne.second[e] * q_[ep] * flux_u_[ep];
        out.du[e] = (-grad_b + pv_flux_v) * inv_dx;
        out.dv[e] = -pv_flux_u * inv_dx;
        out.dh[e] = -grad_fu * inv_dx;
    }
}

}  // namespace splitfem
