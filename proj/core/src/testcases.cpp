#include "splitfem/testcases.hpp"

#include <cmath>
#include <string>

#include "splitfem/errors.hpp"

namespace splitfem {

namespace {
// Periodic images summed on each side; exp(-(2.5 L / (0.2 L))^2) is far below rounding.
constexpr int kImages = 3;
}  // namespace

void TestCaseConfig::validate(const ModelParams& params) const {
    if (!(width > 0.0)) throw ValidationError("test case width must be positive");
    if (!(params.h_mean + std::min(amplitude, 0.0) > 0.0))
        throw ValidationError("amplitude + h_mean must be positive");
    if (balance_fraction < 0.0 || balance_fraction > 1.0)
        throw ValidationError("balance_fraction must lie in [0, 1]");
    if (center < 0.0 || center >= 1.0) throw ValidationError("center must lie in [0, 1)");
}

std::string_view to_string(TestCase tc) noexcept {
    switch (tc) {
        case TestCase::tc1: return "tc1";
        case TestCase::tc2: return "tc2";
        case TestCase::tc3: return "tc3";
    }
    return "?";
}

TestCase parse_test_case(std::string_view name) {
    if (name == "tc1") return TestCase::tc1;
    if (name == "tc2") return TestCase::tc2;
    if (name == "tc3") return TestCase::tc3;
    throw ValidationError("unknown test case '" + std::string(name) + "' (expected tc1, tc2 or tc3)");
}

TestCaseProfile::TestCaseProfile(const TestCaseConfig& cfg, const ModelParams& params,
                                 double length)
    : cfg_(cfg), params_(params), length_(length) {}

double TestCaseProfile::height(double x) const {
    const double sigma = cfg_.width * length_;
    const double x0 = cfg_.center * length_;
    double s = 0.0;
    for (int k = -kImages; k <= kImages; ++k) {
        const double d = (x - x0 + k * length_) / sigma;
        s += std::exp(-d * d);
    }
    return params_.h_mean + cfg_.amplitude * s;
}

double TestCaseProfile::height_slope(double x) const {
    const double sigma = cfg_.width * length_;
    const double x0 = cfg_.center * length_;
    double s = 0.0;
    for (int k = -kImages; k <= kImages; ++k) {
        const double d = (x - x0 + k * length_) / sigma;
        s += -2.0 * d / sigma * std::exp(-d * d);
    }
    return cfg_.amplitude * s;
}

double TestCaseProfile::slice_velocity(double x) const {
    if (params_.f == 0.0) return 0.0;
    return cfg_.balance_fraction * params_.g / params_.f * height_slope(x);
}

State sample_state(const TestCaseProfile& profile, const Mesh& mesh) {
    State s = State::zeros(mesh.size());
    for (std::size_t e = 0; e < mesh.size(); ++e) {
        double h = 0.0, u = 0.0, v = 0.0;
        for (const auto& qp : gauss2(e, mesh)) {
            h += qp.weight * profile.height(qp.x);
            u += qp.weight * profile.zonal_velocity(qp.x);
            v += qp.weight * profile.slice_velocity(qp.x);
        }
        s.h[e] = h / mesh.dx(e);
        s.u[e] = u / mesh.dx(e);
        s.v[e] = v / mesh.dx(e);
    }
    return s;
}

State geostrophic_state(const TestCaseConfig& cfg, const ModelParams& params, const Mesh& mesh) {
    params.validate();
    cfg.validate(params);
    if (params.f == 0.0) throw ValidationError("geostrophic balance needs a nonzero Coriolis parameter");
    return sample_state(TestCaseProfile(cfg, params, mesh.length()), mesh);
}

State unbalanced_state(const TestCaseConfig& cfg, const ModelParams& params, const Mesh& mesh) {
    params.validate();
    cfg.validate(params);
    return sample_state(TestCaseProfile(cfg, params, mesh.length()), mesh);
}

State initial_state(TestCase tc, const TestCaseConfig& cfg, const ModelParams& params,
                    const Mesh& mesh) {
    return tc == TestCase::tc3 ? unbalanced_state(cfg, params, mesh)
                               : geostrophic_state(cfg, params, mesh);
}

}  // namespace splitfem
