#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "splitfem_app/config.hpp"

namespace splitfem::app {

/// Raised when a simulation aborts on a numerical failure (exit code 3).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double x);

struct RunOutput {
    std::filesystem::path diag_csv;
    std::vector<std::filesystem::path> field_csvs;
    std::filesystem::path meta_json;
    SimulationResult result;
};

/// Simulate the configured test case and write
///   <prefix>_diag.csv, <prefix>_fields_<t>.csv (one per sample), <prefix>_meta.json
/// into output.dir. Throws NumericalFailure (after writing what was computed
/// and <prefix>_error.json) when stepping aborts.
RunOutput cmd_run(const RunConfig& config);

struct ConvergenceRow {
    std::size_t n = 0;
    double l2_h_p0 = 0, l2_u_p0 = 0, l2_v_p0 = 0;
    double l2_h_p1 = 0, l2_u_p1 = 0, l2_v_p1 = 0;
};

struct ConvergenceTable {
    std::string scheme;
    std::vector<ConvergenceRow> rows;
    /// slope(i) between rows i-1 and i for each column, NaN in row 0.
    std::vector<std::array<double, 6>> slopes;
};

/// L2 errors of the balanced steady state (TC2) after `cycles` cycles for
/// each n. Writes <prefix>_converge.csv when write_csv is set.
ConvergenceTable cmd_converge(const RunConfig& config, const std::vector<std::size_t>& n_list,
                              double cycles = 1.0, bool write_csv = true);

/// Least-squares slope of log(err) against log(1/n).
double fitted_order(const std::vector<std::size_t>& n, const std::vector<double>& err);

struct DispersionTable {
    std::vector<std::string> specs;
    std::vector<double> k;
    std::vector<double> omega_analytic_continuum;
    std::vector<double> omega_avg_closed_form;
    std::vector<std::vector<double>> omega_measured;  ///< [spec][k_index]
};

/// Measured dispersion for each spec at k_index = 0..n/2 on the configured
/// mesh. Writes <prefix>_dispersion.csv when write_csv is set.
DispersionTable cmd_dispersion(const RunConfig& config, const std::vector<ClosureSpec>& specs,
                               bool write_csv = true);

struct BenchSpecResult {
    std::string scheme;
    std::size_t n = 0;
    double closure_ns_median = 0;
    double step_ns_median = 0;
    std::vector<double> step_ns_repeat_medians;
    long closure_linear_solves = 0;  ///< per closure-stage call
};

struct BenchResult {
    std::size_t steps = 0;
    std::size_t repeats = 0;
    std::vector<BenchSpecResult> specs;
    /// Full-step and closure-stage time ratios, keyed "<spec>/avg-avg".
    std::map<std::string, double> step_speedup;
    std::map<std::string, double> closure_speedup;
};

/// Time the closure stage and the full RK4 step for avg-avg, gp1-gp1 and
/// gp1-gp0 (the last on n_bench + 1 elements, gp0 needing odd n). Writes
/// <prefix>_bench.json when write_json is set.
BenchResult cmd_bench(const RunConfig& config, std::size_t n_bench, std::size_t steps,
                      std::size_t repeats = 3, bool write_json = true);

nlohmann::json to_json(const BenchResult& bench);

/// Build and toolchain description embedded in meta files.
nlohmann::json build_info();

}  // namespace splitfem::app
