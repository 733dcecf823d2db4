#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "splitfem/closures.hpp"
#include "splitfem/integrators.hpp"
#include "splitfem/mesh.hpp"
#include "splitfem/testcases.hpp"

namespace splitfem::app {

/// Raised for malformed, incomplete or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeshSection {
    std::size_t n = 512;
    double length = 1.0;

    bool operator==(const MeshSection&) const = default;
};

struct TimeSection {
    TimeScheme scheme = TimeScheme::rk4;
    std::optional<double> dt;  ///< unset: default_time_step()
    double t_end_cycles = 10.0;
    std::size_t sample_every = 500;
    double fp_tol = 1e-13;
    int fp_max_iters = 100;

    bool operator==(const TimeSection&) const = default;
};

struct TestCaseSection {
    TestCase name = TestCase::tc1;
    TestCaseConfig config;

    bool operator==(const TestCaseSection&) const = default;
};

struct OutputSection {
    std::string dir = "out";
    std::string prefix = "run";

    bool operator==(const OutputSection&) const = default;
};

/// Complete run configuration. Serialized as one JSON document:
///
///   {"mesh": {"n", "length"}, "params": {"g", "f", "h_mean"},
///    "closure": {"height", "velocity"},
///    "time": {"scheme", "dt", "t_end_cycles", "sample_every", "fp_tol", "fp_max_iters"},
///    "testcase": {"name", "amplitude", "width", "center", "balance_fraction"},
///    "output": {"dir", "prefix"}}
///
/// Missing keys take defaults; unknown keys are rejected.
struct RunConfig {
    MeshSection mesh;
    ModelParams params{1.0, 10.0, 1.0};
    ClosureSpec closure;
    TimeSection time;
    TestCaseSection testcase;
    OutputSection output;

    /// Checks value ranges and closure/mesh compatibility. Throws ConfigError.
    void validate() const;

    Mesh make_mesh() const;
    TimeConfig time_config(const Mesh& mesh) const;
    double t_end(const Mesh& mesh) const;

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Parses and validates. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& j);

/// Apply "a.b=value" overrides; value is parsed as JSON, falling back to a string.
void apply_overrides(nlohmann::json& j, const std::vector<std::string>& assignments);

/// Reads the file (if non-empty path), applies overrides and the
/// SPLITFEM_OUT_DIR environment variable, then validates.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace splitfem::app
