#include <cmath>

#include "doctest.h"
#include "splitfem/errors.hpp"
#include "splitfem/operators.hpp"
#include "support/oracles.hpp"

using namespace splitfem;

namespace {

oracle::Dense dense_of(const TwoBandCirculant& a) {
    oracle::Dense m(a.size());
    m.a = a.dense();
    return m;
}

oracle::Dense dense_of(const TridiagCirculant& a) { return oracle::densify(a, a.size()); }

oracle::Dense dense_of(const DiagonalMatrix& a) { return oracle::densify(a, a.size()); }

oracle::Dense element_mass(const Mesh& mesh) {
    oracle::Dense m(mesh.size());
    for (std::size_t e = 0; e < mesh.size(); ++e) m(e, e) = oracle::width(mesh, e);
    return m;
}

}  // namespace

TEST_CASE("assembled matrices match quadrature on random meshes") {
    std::mt19937 rng(11);
    for (std::size_t n = 3; n <= 17; ++n) {
        CAPTURE(n);
        const auto mesh = oracle::random_mesh(n, rng, 1.0 + 0.1 * static_cast<double>(n));
        const Operators ops(mesh);
        const auto mass_en = oracle::node_element_mass(mesh);
        CHECK(oracle::max_abs_diff(dense_of(ops.mass_nn), oracle::p1_mass(mesh)) <= 1e-14);
        CHECK(oracle::max_abs_diff(dense_of(ops.mass_ee), element_mass(mesh)) <= 1e-14);
        CHECK(oracle::max_abs_diff(dense_of(ops.mass_en), mass_en) <= 1e-14);
        CHECK(oracle::max_abs_diff(dense_of(ops.mass_ne), oracle::transpose(mass_en)) <= 1e-14);
        CHECK(oracle::max_abs_diff(dense_of(ops.deriv), oracle::derivative(mesh)) <= 1e-14);
    }
}

TEST_CASE("P1 mass matrix rows") {
    const auto mesh = Mesh::uniform(4, 1.0);
    const auto m = assemble_mass_nn(mesh);
    for (std::size_t l = 0; l < 4; ++l) {
        CHECK(m.diag[l] == doctest::Approx(1.0 / 6.0));
        CHECK(m.lower[l] == doctest::Approx(0.25 / 6.0));
        CHECK(m.upper[l] == doctest::Approx(0.25 / 6.0));
    }
    std::mt19937 rng(2);
    const auto rm = oracle::random_mesh(9, rng);
    const auto r = assemble_mass_nn(rm);
    for (std::size_t l = 0; l < rm.size(); ++l) {
        const double row = r.lower[l] + r.diag[l] + r.upper[l];
        CHECK(std::abs(row - 0.5 * (rm.dx(rm.prev(l)) + rm.dx(l))) <= 1e-15);
    }
}

TEST_CASE("P0 mass matrix") {
    const auto m = assemble_mass_ee(Mesh::uniform(512, 1.0));
    for (double d : m.diag) CHECK(d == 1.0 / 512.0);
    const auto nu = assemble_mass_ee(Mesh::from_nodes({0.0, 0.1, 0.5}, 1.0));
    CHECK(nu.diag[0] == doctest::Approx(0.1));
    CHECK(nu.diag[1] == doctest::Approx(0.4));
    CHECK(nu.diag[2] == doctest::Approx(0.5));
}

TEST_CASE("mixed mass matrix") {
    const auto mesh = Mesh::uniform(6, 1.5);
    const auto en = assemble_mass_en(mesh);
    for (std::size_t l = 0; l < 6; ++l) {
        CHECK(en.first[l] == doctest::Approx(0.125));
        CHECK(en.second[l] == doctest::Approx(0.125));
    }
    std::mt19937 rng(4);
    const auto rm = oracle::random_mesh(8, rng);
    const auto ne = assemble_mass_en(rm, true);
    const auto ones = ne.apply(std::vector<double>(8, 1.0));
    for (std::size_t e = 0; e < 8; ++e) CHECK(std::abs(ones[e] - rm.dx(e)) <= 1e-15);
    const auto en_r = assemble_mass_en(rm);
    for (std::size_t l = 0; l < 8; ++l)
        CHECK(std::abs(en_r.first[l] + en_r.second[l] - 0.5 * (rm.dx(rm.prev(l)) + rm.dx(l))) <= 1e-15);
}

TEST_CASE("derivative matrix") {
    const auto mesh = Mesh::uniform(8, 1.0);
    const auto g = assemble_deriv_en(mesh);
    const auto zero = g.apply(std::vector<double>(8, 3.0));
    CHECK(oracle::max_abs(zero) == 0.0);

    std::vector<double> x(mesh.node_x().begin(), mesh.node_x().end());
    const auto d = g.apply(x);
    for (std::size_t e = 0; e + 1 < 8; ++e) CHECK(d[e] == doctest::Approx(0.125));

    const auto dense = dense_of(g);
    for (std::size_t j = 0; j < 8; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < 8; ++i) col += dense(i, j);
        CHECK(col == 0.0);
    }
}

TEST_CASE("averaging operator") {
    const auto mesh = Mesh::uniform(4, 1.0);
    const auto a = averaging_en(mesh);
    const auto c = a.apply(std::vector<double>{0.0, 1.0, 0.0, 1.0});
    for (double x : c) CHECK(x == 0.5);
    const auto nyquist = a.apply(std::vector<double>{1.0, -1.0, 1.0, -1.0});
    CHECK(oracle::max_abs(nyquist) == 0.0);
    const auto k = a.apply(std::vector<double>(4, 2.5));
    for (double x : k) CHECK(x == 2.5);

    std::mt19937 rng(8);
    const auto rm = oracle::random_mesh(7, rng);
    const auto lw = averaging_en(rm, AveragingWeights::length);
    for (double x : lw.apply(std::vector<double>(7, -1.5))) CHECK(std::abs(x + 1.5) <= 1e-15);
}

TEST_CASE("transpose reverses the layout") {
    std::mt19937 rng(6);
    const auto rm = oracle::random_mesh(5, rng);
    const auto ne = assemble_mass_en(rm, true);
    const auto en = assemble_mass_en(rm);
    CHECK(oracle::max_abs_diff(dense_of(ne.transpose()), dense_of(en)) == 0.0);
    CHECK(ne.transpose().first_offset < ne.transpose().second_offset);
}

TEST_CASE("cyclic tridiagonal solver") {
    SUBCASE("identity") {
        TridiagCirculant id{std::vector<double>(5, 0.0), std::vector<double>(5, 1.0), std::vector<double>(5, 0.0)};
        const std::vector<double> b{1, 2, 3, 4, 5};
        CHECK(solve_tridiag_circulant(id, b) == b);
    }
    SUBCASE("constructed solution") {
        const auto mesh = Mesh::uniform(10, 1.0);
        const auto m = assemble_mass_nn(mesh);
        const auto x = solve_tridiag_circulant(m, m.apply(std::vector<double>(10, 1.0)));
        for (double v : x) CHECK(std::abs(v - 1.0) <= 1e-13);
    }
    SUBCASE("dense oracle on random dominant systems") {
        std::mt19937 rng(21);
        for (std::size_t n = 3; n <= 17; ++n) {
            CAPTURE(n);
            TridiagCirculant a{oracle::random_vector(n, rng), oracle::random_vector(n, rng),
                               oracle::random_vector(n, rng)};
            for (std::size_t i = 0; i < n; ++i)
                a.diag[i] = (a.diag[i] >= 0 ? 1.0 : -1.0) * (std::abs(a.lower[i]) + std::abs(a.upper[i]) + 0.5);
            const auto b = oracle::random_vector(n, rng);
            const auto expected = oracle::solve(oracle::densify(a, n), b);
            CHECK(oracle::max_abs_diff(solve_tridiag_circulant(a, b), expected) <= 1e-12);

            CyclicTridiagSolver s(a);
            std::vector<double> x = b;
            s.solve(x, x);
            CHECK(oracle::max_abs_diff(x, expected) <= 1e-12);

            std::vector<double> once(n), work(2 * n);
            solve_cyclic_tridiag_once(a.lower, a.diag, a.upper, b, once, work);
            CHECK(oracle::max_abs_diff(once, expected) <= 1e-12);
        }
    }
    SUBCASE("random SPD mass matrix at n = 16") {
        std::mt19937 rng(16);
        const auto mesh = oracle::random_mesh(16, rng);
        const auto m = assemble_mass_nn(mesh);
        const auto b = oracle::random_vector(16, rng);
        CHECK(oracle::max_abs_diff(solve_tridiag_circulant(m, b), oracle::solve(oracle::p1_mass(mesh), b)) <= 1e-12);
    }
    SUBCASE("singular matrix is reported") {
        TridiagCirculant lap{std::vector<double>(6, -1.0), std::vector<double>(6, 2.0), std::vector<double>(6, -1.0)};
        CHECK_THROWS_AS(solve_tridiag_circulant(lap, std::vector<double>(6, 0.0)), SingularMatrixError);
    }
}

TEST_CASE("two-band solver") {
    SUBCASE("n = 3 constructed solution") {
        const auto mesh = Mesh::uniform(3, 1.0);
        const auto a = averaging_ne(mesh);
        const auto x = solve_two_band(a, a.apply(std::vector<double>(3, 1.0)));
        for (double v : x) CHECK(std::abs(v - 1.0) <= 1e-15);
    }
    SUBCASE("even n is singular") {
        const auto a = averaging_ne(Mesh::uniform(4, 1.0));
        try {
            solve_two_band(a, std::vector<double>(4, 1.0));
            FAIL("expected SingularMatrixError");
        } catch (const SingularMatrixError& e) {
            CHECK(std::string(e.what()).find("alternating") != std::string::npos);
        }
    }
    SUBCASE("dense oracle") {
        std::mt19937 rng(5);
        for (std::size_t n : {3u, 5u, 7u, 9u, 13u, 17u}) {
            CAPTURE(n);
            const auto mesh = oracle::random_mesh(n, rng);
            for (const auto& a : {assemble_mass_en(mesh, true), assemble_mass_en(mesh)}) {
                const auto b = oracle::random_vector(n, rng);
                const auto expected = oracle::solve(dense_of(a), b);
                CHECK(oracle::max_abs_diff(solve_two_band(a, b), expected) <= 1e-12);
            }
        }
    }
}

TEST_CASE("solver counter") {
    const auto mesh = Mesh::uniform(5, 1.0);
    const Operators ops(mesh);
    const long before = linear_solve_count();
    std::vector<double> x(5, 1.0);
    ops.mass_nn_solver.solve(x, x);
    solve_two_band(ops.mass_ne, x);
    CHECK(linear_solve_count() - before == 2);
}
