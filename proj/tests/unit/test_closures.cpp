#include <cmath>

#include "doctest.h"
#include "splitfem/closures.hpp"
#include "splitfem/errors.hpp"
#include "support/oracles.hpp"

using namespace splitfem;

namespace {

std::vector<double> close(ClosureKind kind, const Mesh& mesh, const std::vector<double>& c) {
    const Operators ops(mesh);
    return close_to_nodal(kind, mesh, ops, ElementField(c)).vector();
}

}  // namespace

TEST_CASE("closure names") {
    CHECK(parse_closure_kind("gp1") == ClosureKind::gp1);
    CHECK(parse_closure_kind("gp0") == ClosureKind::gp0);
    CHECK(parse_closure_kind("avg") == ClosureKind::avg);
    CHECK_THROWS_AS(parse_closure_kind("gp2"), ValidationError);

    const auto spec = ClosureSpec::parse("gp1-gp0");
    CHECK(spec.velocity == ClosureKind::gp1);
    CHECK(spec.height == ClosureKind::gp0);
    CHECK(spec.label() == "gp1-gp0");
    CHECK(ClosureSpec::parse(spec.label()) == spec);
    CHECK_THROWS_AS(ClosureSpec::parse("gp1"), ValidationError);
}

TEST_CASE("gp0 needs an odd number of elements") {
    CHECK_THROWS_AS(ClosureSpec::parse("avg-gp0").validate_for(4), ValidationError);
    CHECK_NOTHROW(ClosureSpec::parse("avg-gp0").validate_for(5));
    CHECK_NOTHROW(ClosureSpec::parse("gp1-gp1").validate_for(4));
}

TEST_CASE("closures preserve constants") {
    std::mt19937 rng(1);
    const auto mesh = oracle::random_mesh(9, rng);
    for (auto kind : {ClosureKind::gp1, ClosureKind::gp0, ClosureKind::avg}) {
        CAPTURE(to_string(kind));
        for (double x : close(kind, mesh, std::vector<double>(9, 1.75))) CHECK(std::abs(x - 1.75) <= 1e-14);
    }
}

TEST_CASE("averaging closure adjacency") {
    const auto mesh = Mesh::uniform(5, 1.0);
    const auto x = close(ClosureKind::avg, mesh, {0.0, 1.0, 0.0, 1.0, 0.0});
    const std::vector<double> expected{0.0, 0.5, 0.5, 0.5, 0.5};
    CHECK(x == expected);
    const auto nyquist = close(ClosureKind::avg, Mesh::uniform(6, 1.0), {1, -1, 1, -1, 1, -1});
    CHECK(oracle::max_abs(nyquist) == 0.0);
}

TEST_CASE("Galerkin closures match dense projections") {
    std::mt19937 rng(17);
    for (std::size_t n : {8u, 9u, 15u}) {
        CAPTURE(n);
        const auto mesh = oracle::random_mesh(n, rng);
        const auto c = oracle::random_vector(n, rng);
        CHECK(oracle::max_abs_diff(close(ClosureKind::gp1, mesh, c), oracle::gp1(mesh, c)) <= 1e-12);
        if (n % 2 == 1) CHECK(oracle::max_abs_diff(close(ClosureKind::gp0, mesh, c), oracle::gp0(mesh, c)) <= 1e-12);
        CHECK(oracle::max_abs_diff(close(ClosureKind::avg, mesh, c), oracle::avg(c)) == 0.0);
    }
}

TEST_CASE("gp1 residual is orthogonal to P1") {
    std::mt19937 rng(23);
    const auto mesh = oracle::random_mesh(11, rng);
    const auto c = oracle::random_vector(11, rng);
    const auto x = close(ClosureKind::gp1, mesh, c);
    for (std::size_t l = 0; l < 11; ++l) {
        double r = 0.0;
        for (std::size_t e = 0; e < 11; ++e)
            for (const auto& [t, w] : oracle::gauss3_unit()) {
                const double xh = (1.0 - t) * x[e] + t * x[(e + 1) % 11];
                r += w * oracle::width(mesh, e) * (xh - c[e]) * oracle::hat_local(l, e, t, 11);
            }
        CHECK(std::abs(r) <= 1e-15);
    }
}

TEST_CASE("closures are linear") {
    std::mt19937 rng(29);
    const auto mesh = oracle::random_mesh(7, rng);
    const auto a = oracle::random_vector(7, rng);
    const auto b = oracle::random_vector(7, rng);
    std::vector<double> combo(7);
    for (std::size_t i = 0; i < 7; ++i) combo[i] = 2.0 * a[i] - 0.5 * b[i];
    for (auto kind : {ClosureKind::gp1, ClosureKind::gp0, ClosureKind::avg}) {
        const auto xa = close(kind, mesh, a), xb = close(kind, mesh, b), xc = close(kind, mesh, combo);
        for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(xc[i] - (2.0 * xa[i] - 0.5 * xb[i])) <= 1e-13);
    }
}

TEST_CASE("non-finite input is rejected") {
    const auto mesh = Mesh::uniform(5, 1.0);
    const Operators ops(mesh);
    ElementField c(5, 1.0);
    c[3] = INFINITY;
    CHECK_THROWS_AS(close_to_nodal(ClosureKind::avg, mesh, ops, c), ValidationError);
}

TEST_CASE("close_state composes single-field closures") {
    std::mt19937 rng(31);
    const auto mesh = oracle::random_mesh(9, rng);
    const Operators ops(mesh);
    State s{ElementField(oracle::random_vector(9, rng)), ElementField(oracle::random_vector(9, rng)),
            ElementField(oracle::random_vector(9, rng, 0.5, 1.5))};
    const auto spec = ClosureSpec::parse("gp1-gp0");
    const auto nodal = close_state(spec, mesh, ops, s);
    CHECK(nodal.h0 == close_to_nodal(ClosureKind::gp0, mesh, ops, s.h));
    CHECK(nodal.u0 == close_to_nodal(ClosureKind::gp1, mesh, ops, s.u));
    CHECK(nodal.v0 == close_to_nodal(ClosureKind::gp1, mesh, ops, s.v));

    const State rest{ElementField(9, 0.0), ElementField(9, 0.0), ElementField(9, 2.0)};
    for (const char* label : {"avg-avg", "gp1-gp1", "gp1-gp0", "gp0-gp1", "gp0-gp0", "avg-gp1"}) {
        const auto r = close_state(ClosureSpec::parse(label), mesh, ops, rest);
        for (std::size_t l = 0; l < 9; ++l) {
            CHECK(std::abs(r.h0[l] - 2.0) <= 1e-14);
            CHECK(std::abs(r.u0[l]) <= 1e-14);
        }
    }
}
