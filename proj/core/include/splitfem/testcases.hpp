#pragma once

#include <string_view>

#include "splitfem/mesh.hpp"

namespace splitfem {

/// Gaussian height bump with a geostrophically balanced fraction of the
/// slice-normal velocity.
struct TestCaseConfig {
    double amplitude = 0.075;     ///< bump height above h_mean
    double width = 0.05;          ///< Gaussian half-width, as a fraction of L
    double center = 0.5;          ///< bump center, as a fraction of L
    double balance_fraction = 1;  ///< 1 = geostrophic balance, 0 = pure height bump

    void validate(const ModelParams& params) const;
    bool operator==(const TestCaseConfig&) const = default;
};

enum class TestCase {
    tc1,  ///< balanced flow, long runs for conservation
    tc2,  ///< balanced steady state, convergence reference
    tc3,  ///< partially balanced, dispersive wave trains
};

std::string_view to_string(TestCase tc) noexcept;
TestCase parse_test_case(std::string_view name);

/// Continuous profiles of a test case on a periodic domain.
class TestCaseProfile {
public:
    TestCaseProfile(const TestCaseConfig& cfg, const ModelParams& params, double length);

    double height(double x) const;
    double height_slope(double x) const;
    /// balance_fraction * (g / f) * dh/dx; zero when f == 0.
    double slice_velocity(double x) const;
    double zonal_velocity(double) const { return 0.0; }

private:
    TestCaseConfig cfg_;
    ModelParams params_;
    double length_;
};

/// Element means (two-point Gauss) of the continuous profiles.
State sample_state(const TestCaseProfile& profile, const Mesh& mesh);

/// Balanced state (TC1/TC2). Requires f != 0.
State geostrophic_state(const TestCaseConfig& cfg, const ModelParams& params, const Mesh& mesh);

/// Partially balanced state (TC3); balance_fraction < 1, f may be 0.
State unbalanced_state(const TestCaseConfig& cfg, const ModelParams& params, const Mesh& mesh);

/// Dispatch on the test case name, using cfg.balance_fraction as given.
State initial_state(TestCase tc, const TestCaseConfig& cfg, const ModelParams& params,
                    const Mesh& mesh);

}  // namespace splitfem
