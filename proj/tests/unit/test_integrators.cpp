#include <cmath>

#include "doctest.h"
#include "splitfem/errors.hpp"
#include "splitfem/dynamics.hpp"
#include "splitfem/integrators.hpp"
#include "splitfem/testcases.hpp"
#include "support/oracles.hpp"

using namespace splitfem;

namespace {

// u' = -w v, v' = w u on every element: a family of decoupled rotations.
RhsFunction rotation(double w) {
    return [w](const State& s, Tendency& k) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            k.du[i] = -w * s.v[i];
            k.dv[i] = w * s.u[i];
            k.dh[i] = 0.0;
        }
    };
}

State unit_state() {
    State s = State::zeros(3);
    for (std::size_t i = 0; i < 3; ++i) {
        s.u[i] = std::cos(0.4 * static_cast<double>(i));
        s.v[i] = std::sin(0.4 * static_cast<double>(i));
        s.h[i] = 1.0;
    }
    return s;
}

double rotation_error(const State& s, const State& s0, double angle) {
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double u = std::cos(angle) * s0.u[i] - std::sin(angle) * s0.v[i];
        const double v = std::sin(angle) * s0.u[i] + std::cos(angle) * s0.v[i];
        err = std::max({err, std::abs(s.u[i] - u), std::abs(s.v[i] - v)});
    }
    return err;
}

State integrate(const State& s0, const RhsFunction& f, double t, std::size_t steps) {
    State s = s0;
    for (std::size_t i = 0; i < steps; ++i) s = rk4_step(s, t / static_cast<double>(steps), f);
    return s;
}

}  // namespace

TEST_CASE("scheme names") {
    CHECK(parse_time_scheme("rk4") == TimeScheme::rk4);
    CHECK(parse_time_scheme("implicit_midpoint") == TimeScheme::implicit_midpoint);
    CHECK_THROWS_AS(parse_time_scheme("euler"), ValidationError);
    CHECK_THROWS_AS((TimeConfig{0.0}.validate()), ValidationError);
}

TEST_CASE("rest state is a fixed point") {
    const auto mesh = Mesh::uniform(9, 1.0);
    const Operators ops(mesh);
    const ModelParams p{1.0, 5.0, 1.0};
    const State rest{ElementField(9, 0.0), ElementField(9, 0.0), ElementField(9, 1.0)};
    const RhsFunction f = [&](const State& s, Tendency& k) { k = rhs(s, p, ClosureSpec{}, mesh, ops); };
    const auto a = rk4_step(rest, 0.01, f);
    const auto b = midpoint_step(rest, 0.01, f);
    for (std::size_t e = 0; e < 9; ++e) {
        CHECK(std::abs(a.h[e] - 1.0) <= 1e-15);
        CHECK(std::abs(b.h[e] - 1.0) <= 1e-15);
        CHECK(std::abs(a.u[e]) <= 1e-15);
    }
}

TEST_CASE("RK4 one step matches the exponential to fifth order") {
    const auto s0 = unit_state();
    const double w = 1.0;
    const double e1 = rotation_error(rk4_step(s0, 0.1, rotation(w)), s0, 0.1);
    const double e2 = rotation_error(rk4_step(s0, 0.05, rotation(w)), s0, 0.05);
    // Local error of a four-stage method on y' = iwy is (w dt)^5 / 120.
    CHECK(e1 == doctest::Approx(std::pow(0.1, 5) / 120.0).epsilon(0.05));
    CHECK(e1 / e2 == doctest::Approx(32.0).epsilon(0.05));
}

TEST_CASE("RK4 global order") {
    const auto s0 = unit_state();
    std::vector<std::size_t> steps{10, 20, 40, 80};
    std::vector<double> err;
    for (auto n : steps) err.push_back(rotation_error(integrate(s0, rotation(2.0), 3.0, n), s0, 6.0));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double x = std::log(static_cast<double>(steps[i])), y = std::log(err[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double m = static_cast<double>(steps.size());
    const double slope = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("implicit midpoint has unit amplification on rotations") {
    const auto s0 = unit_state();
    State s = s0;
    for (int i = 0; i < 200; ++i) s = midpoint_step(s, 0.3, rotation(1.0), 1e-15, 200);
    for (std::size_t i = 0; i < 3; ++i) {
        const double r0 = std::hypot(s0.u[i], s0.v[i]);
        CHECK(std::abs(std::hypot(s.u[i], s.v[i]) - r0) <= 1e-13);
    }
    // The phase follows 2 atan(w dt / 2) per step.
    const double angle = 200 * 2.0 * std::atan(0.15);
    CHECK(rotation_error(s, s0, angle) <= 1e-12);
}

TEST_CASE("midpoint reports non-convergence") {
    const auto s0 = unit_state();
    MidpointStepper m(3, 1e-14, 3);
    State out = State::zeros(3);
    CHECK_THROWS_AS(m.step(s0, 0.5, rotation(1.0), out), ConvergenceError);
}

TEST_CASE("RK4 on the balanced test case") {
    const auto mesh = Mesh::uniform(64, 1.0);
    const Operators ops(mesh);
    const ModelParams p{1.0, 10.0, 1.0};
    TestCaseConfig cfg;
    cfg.balance_fraction = 0.5;
    const auto s0 = geostrophic_state(TestCaseConfig{}, p, mesh);
    State start = s0;
    const auto pert = unbalanced_state(cfg, p, mesh);
    start.v = pert.v;
    TendencyEvaluator ev(mesh, ops, p, ClosureSpec{});
    const RhsFunction f = [&](const State& s, Tendency& k) { ev(s, k); };
    const double t = 0.04;
    const auto ref = integrate(start, f, t, 64);
    auto err = [&](std::size_t n) {
        const auto s = integrate(start, f, t, n);
        return oracle::max_abs_diff(s.u.vector(), ref.u.vector());
    };
    const double ratio = err(4) / err(8);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("midpoint iteration count does not grow when dt is halved") {
    const auto mesh = Mesh::uniform(64, 1.0);
    const Operators ops(mesh);
    const ModelParams p{1.0, 10.0, 1.0};
    const auto s0 = geostrophic_state(TestCaseConfig{}, p, mesh);
    TendencyEvaluator ev(mesh, ops, p, ClosureSpec{});
    const RhsFunction f = [&](const State& s, Tendency& k) { ev(s, k); };
    const double dt = default_time_step(mesh, p);
    int previous = 1 << 30;
    for (double scale : {1.0, 0.5, 0.25}) {
        MidpointStepper m(64, 1e-13, 100);
        State out = State::zeros(64);
        m.step(s0, scale * dt, f, out);
        CHECK(m.last_iterations() <= previous);
        previous = m.last_iterations();
    }
}

TEST_CASE("time step and cycle length") {
    const auto mesh = Mesh::uniform(100, 2.0);
    const ModelParams p{4.0, 0.0, 1.0};
    CHECK(default_time_step(mesh, p) == doctest::Approx(0.1 * 0.02 / 2.0));
    CHECK(cycle_time(mesh, p) == doctest::Approx(1.0));
}

TEST_CASE("run_simulation bookkeeping") {
    const auto mesh = Mesh::uniform(16, 1.0);
    const Operators ops(mesh);
    const ModelParams p{1.0, 10.0, 1.0};
    const auto s0 = geostrophic_state(TestCaseConfig{}, p, mesh);
    TimeConfig tc;
    tc.dt = 0.01;

    SUBCASE("cadence") {
        const auto r = run_simulation(s0, p, ClosureSpec{}, tc, 0.2, 5, mesh, ops);
        REQUIRE(r.ok());
        CHECK(r.steps == 20);
        CHECK(r.samples.size() == 20 / 5 + 1);
        CHECK(r.samples.back().t == 0.2);
    }
    SUBCASE("last step is shortened") {
        const auto r = run_simulation(s0, p, ClosureSpec{}, tc, 0.035, 100, mesh, ops);
        CHECK(r.steps == 4);
        CHECK(r.samples.size() == 2);
        CHECK(r.samples.back().t == 0.035);
    }
    SUBCASE("zero length run") {
        const auto r = run_simulation(s0, p, ClosureSpec{}, tc, 0.0, 1, mesh, ops);
        CHECK(r.steps == 0);
        REQUIRE(r.samples.size() == 1);
        CHECK(r.samples[0].state == s0);
        CHECK(r.samples[0].diagnostics.energy == diagnose(s0, p, ClosureSpec{}, mesh, ops, 0.0).energy);
    }
    SUBCASE("tiny run takes one shortened step") {
        const auto r = run_simulation(s0, p, ClosureSpec{}, tc, 1e-6, 1, mesh, ops);
        CHECK(r.steps == 1);
        CHECK(r.samples.size() == 2);
        CHECK(std::abs(r.samples[1].diagnostics.energy - r.samples[0].diagnostics.energy) <= 1e-12);
    }
    SUBCASE("blow-up keeps the partial series") {
        TimeConfig big = tc;
        big.dt = 5.0;
        const auto r = run_simulation(s0, p, ClosureSpec{}, big, 500.0, 1, mesh, ops);
        CHECK_FALSE(r.ok());
        CHECK(r.samples.size() >= 1);
    }
    SUBCASE("mass and PV are conserved by both schemes") {
        for (auto scheme : {TimeScheme::rk4, TimeScheme::implicit_midpoint}) {
            TimeConfig t2 = tc;
            t2.scheme = scheme;
            const auto r = run_simulation(s0, p, ClosureSpec::parse("gp1-gp1"), t2, 0.1, 1, mesh, ops);
            REQUIRE(r.ok());
            const auto& a = r.samples.front().diagnostics;
            for (const auto& s : r.samples) {
                CHECK(std::abs(s.diagnostics.mass_e - a.mass_e) <= 1e-12 * a.mass_e);
                CHECK(std::abs(s.diagnostics.total_pv - a.total_pv) <= 1e-12 * a.total_pv);
            }
        }
    }
}
