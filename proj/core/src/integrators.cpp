#include "splitfem/integrators.hpp"

#include <algorithm>
#include <cmath>

#include "splitfem/dynamics.hpp"
#include "splitfem/errors.hpp"

namespace splitfem {

std::string_view to_string(TimeScheme scheme) noexcept {
    switch (scheme) {
        case TimeScheme::rk4: return "rk4";
        case TimeScheme::implicit_midpoint: return "implicit_midpoint";
    }
    return "?";
}

TimeScheme parse_time_scheme(std::string_view name) {
    if (name == "rk4") return TimeScheme::rk4;
    if (name == "implicit_midpoint") return TimeScheme::implicit_midpoint;
    throw ValidationError("unknown time scheme '" + std::string(name) +
                          "' (expected rk4 or implicit_midpoint)");
}

void TimeConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step dt must be positive");
    if (!(fp_tol > 0.0)) throw ValidationError("fp_tol must be positive");
    if (fp_max_iters < 1) throw ValidationError("fp_max_iters must be at least 1");
}

double default_time_step(const Mesh& mesh, const ModelParams& params) {
    return 0.1 * mesh.min_dx() / params.wave_speed();
}

double cycle_time(const Mesh& mesh, const ModelParams& params) {
    return mesh.length() / params.wave_speed();
}

Rk4Stepper::Rk4Stepper(std::size_t n)
    : k1_(Tendency::zeros(n)),
      k2_(Tendency::zeros(n)),
      k3_(Tendency::zeros(n)),
      k4_(Tendency::zeros(n)),
      stage_(State::zeros(n)) {}

void Rk4Stepper::step(const State& in, double dt, const RhsFunction& rhs, State& out) {
    rhs(in, k1_);
    advance(in, 0.5 * dt, k1_, stage_);
    rhs(stage_, k2_);
    advance(in, 0.5 * dt, k2_, stage_);
    rhs(stage_, k3_);
    advance(in, dt, k3_, stage_);
    rhs(stage_, k4_);
    const double w = dt / 6.0;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = in.u[i] + w * (k1_.du[i] + 2.0 * (k2_.du[i] + k3_.du[i]) + k4_.du[i]);
        out.v[i] = in.v[i] + w * (k1_.dv[i] + 2.0 * (k2_.dv[i] + k3_.dv[i]) + k4_.dv[i]);
        out.h[i] = in.h[i] + w * (k1_.dh[i] + 2.0 * (k2_.dh[i] + k3_.dh[i]) + k4_.dh[i]);
    }
}

MidpointStepper::MidpointStepper(std::size_t n, double fp_tol, int fp_max_iters)
    : tol_(fp_tol),
      max_iters_(fp_max_iters),
      k_(Tendency::zeros(n)),
      mid_(State::zeros(n)),
      next_mid_(State::zeros(n)) {}

void MidpointStepper::step(const State& in, double dt, const RhsFunction& rhs, State& out) {
    // s_mid = s + dt/2 rhs(s_mid), starting from s_mid = s.
    mid_ = in;
    double change = 0.0;
    for (int it = 1; it <= max_iters_; ++it) {
        rhs(mid_, k_);
        advance(in, 0.5 * dt, k_, next_mid_);
        change = 0.0;
        for (std::size_t i = 0; i < in.size(); ++i) {
            change = std::max({change, std::abs(next_mid_.u[i] - mid_.u[i]),
                               std::abs(next_mid_.v[i] - mid_.v[i]),
                               std::abs(next_mid_.h[i] - mid_.h[i])});
        }
        std::swap(mid_, next_mid_);
        if (!std::isfinite(change)) break;
        if (change <= tol_) {
            last_iterations_ = it;
            rhs(mid_, k_);
            advance(in, dt, k_, out);
            return;
        }
    }
    last_iterations_ = max_iters_;
    throw ConvergenceError("implicit midpoint fixed-point iteration did not converge (last change " +
                               std::to_string(change) + ")",
                           change, max_iters_);
}

State rk4_step(const State& state, double dt, const RhsFunction& rhs) {
    Rk4Stepper stepper(state.size());
    State out = State::zeros(state.size());
    stepper.step(state, dt, rhs, out);
    if (!out.all_finite()) throw BlowUpError("non-finite state after RK4 step", 0);
    return out;
}

State midpoint_step(const State& state, double dt, const RhsFunction& rhs, double fp_tol,
                    int fp_max_iters) {
    MidpointStepper stepper(state.size(), fp_tol, fp_max_iters);
    State out = State::zeros(state.size());
    stepper.step(state, dt, rhs, out);
    if (!out.all_finite()) throw BlowUpError("non-finite state after midpoint step", 0);
    return out;
}

SimulationResult run_simulation(const State& initial, const ModelParams& params,
                                const ClosureSpec& spec, const TimeConfig& time, double t_end,
                                std::size_t sample_every, const Mesh& mesh, const Operators& ops) {
    time.validate();
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be >= 0");
    if (sample_every == 0) throw ValidationError("sample_every must be at least 1");
    if (initial.size() != mesh.size()) throw ValidationError("state size does not match mesh");

    TendencyEvaluator eval(mesh, ops, params, spec);
    const RhsFunction rhs_fn = [&eval](const State& s, Tendency& k) { eval(s, k); };
    Rk4Stepper rk4(mesh.size());
    MidpointStepper midpoint(mesh.size(), time.fp_tol, time.fp_max_iters);

    SimulationResult result;
    State state = initial;
    State next = State::zeros(mesh.size());
    double t = 0.0;
    auto record = [&] {
        result.samples.push_back(Sample{t, state, diagnose(state, params, spec, mesh, ops, t)});
    };

    try {
        record();
        // Absorb a final sliver shorter than this into the previous step.
        const double sliver = 1e-9 * time.dt;
        while (t_end - t > sliver) {
            double dt = time.dt;
            const bool last = t_end - t - dt <= sliver;
            if (last) dt = t_end - t;
            if (time.scheme == TimeScheme::rk4)
                rk4.step(state, dt, rhs_fn, next);
            else
                midpoint.step(state, dt, rhs_fn, next);
            ++result.steps;
            if (!next.all_finite())
                throw BlowUpError("non-finite state at step " + std::to_string(result.steps),
                                  result.steps);
            std::swap(state, next);
            t = last ? t_end : t + dt;
            if (last || result.steps % sample_every == 0) record();
        }
    } catch (const Error& err) {
        result.error = err.what();
    }
    return result;
}

}  // namespace splitfem
