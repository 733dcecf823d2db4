#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitfem/closures.hpp"
#include "splitfem/diagnostics.hpp"
#include "splitfem/mesh.hpp"

namespace splitfem {

enum class TimeScheme { rk4, implicit_midpoint };

std::string_view to_string(TimeScheme scheme) noexcept;
TimeScheme parse_time_scheme(std::string_view name);

struct TimeConfig {
    double dt = 0.0;  ///< > 0; see default_time_step()
    TimeScheme scheme = TimeScheme::rk4;
    double fp_tol = 1e-13;
    int fp_max_iters = 100;

    void validate() const;
};

/// 0.1 min(dx) / sqrt(g H).
double default_time_step(const Mesh& mesh, const ModelParams& params);

/// Time of one gravity-wave crossing of the domain, L / sqrt(g H).
double cycle_time(const Mesh& mesh, const ModelParams& params);

using RhsFunction = std::function<void(const State&, Tendency&)>;

/// Classical four-stage Runge-Kutta step.
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t n);
    void step(const State& in, double dt, const RhsFunction& rhs, State& out);

private:
    Tendency k1_, k2_, k3_, k4_;
    State stage_;
};

/// Implicit midpoint rule solved by fixed-point iteration on the midpoint state.
class MidpointStepper {
public:
    MidpointStepper(std::size_t n, double fp_tol, int fp_max_iters);
    void step(const State& in, double dt, const RhsFunction& rhs, State& out);
    /// Fixed-point iterations used by the last step.
    int last_iterations() const noexcept { return last_iterations_; }

private:
    double tol_;
    int max_iters_;
    int last_iterations_ = 0;
    Tendency k_;
    State mid_, next_mid_;
};

State rk4_step(const State& state, double dt, const RhsFunction& rhs);
State midpoint_step(const State& state, double dt, const RhsFunction& rhs, double fp_tol = 1e-13,
                    int fp_max_iters = 100);

struct Sample {
    double t = 0.0;
    State state;
    DiagnosticsRecord diagnostics;
};

struct SimulationResult {
    std::vector<Sample> samples;
    std::size_t steps = 0;
    /// Set when stepping aborted; samples up to the failure are retained.
    std::optional<std::string> error;
    bool ok() const noexcept { return !error.has_value(); }
};

/// Integrate to t_end, sampling at step 0, every sample_every steps and at
/// t_end. The last step is shortened to land exactly on t_end.
SimulationResult run_simulation(const State& initial, const ModelParams& params,
                                const ClosureSpec& spec, const TimeConfig& time, double t_end,
                                std::size_t sample_every, const Mesh& mesh, const Operators& ops);

}  // namespace splitfem
