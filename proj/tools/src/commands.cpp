#include "splitfem_app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>

#include "splitfem/diagnostics.hpp"
#include "splitfem/dynamics.hpp"
#include "splitfem/errors.hpp"
#include "splitfem/integrators.hpp"

#ifndef SPLITFEM_VERSION
#define SPLITFEM_VERSION "unknown"
#endif
#ifndef SPLITFEM_GIT_REV
#define SPLITFEM_GIT_REV "unknown"
#endif

namespace splitfem::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void write_json_file(const fs::path& path, const json& j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

fs::path output_dir(const RunConfig& config) {
    fs::path dir(config.output.dir);
    fs::create_directories(dir);
    return dir;
}

std::string time_tag(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", t);
    return buf;
}

void write_diag_csv(const fs::path& path, const std::vector<Sample>& samples) {
    auto out = open_output(path);
    out << "t,energy,mass_e,mass_n,total_pv,enstrophy,energy_half_pe\n";
    for (const auto& s : samples) {
        const auto& d = s.diagnostics;
        out << format_double(d.t) << ',' << format_double(d.energy) << ',' << format_double(d.mass_e)
            << ',' << format_double(d.mass_n) << ',' << format_double(d.total_pv) << ','
            << format_double(d.enstrophy) << ',' << format_double(d.energy_half_pe) << '\n';
    }
}

void write_fields_csv(const fs::path& path, const State& state, const RunConfig& config,
                      const Mesh& mesh, const Operators& ops) {
    const auto nodal = close_state(config.closure, mesh, ops, state);
    const auto q = diagnose_pv(state.h, nodal.v0, config.params.f, mesh, ops);
    auto out = open_output(path);
    out << "x_node,h0,u0,v0,q,x_elem,h_e,u_e,v_e\n";
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double x_elem = mesh.element_left(i) + 0.5 * mesh.dx(i);
        out << format_double(mesh.node_x(i)) << ',' << format_double(nodal.h0[i]) << ','
            << format_double(nodal.u0[i]) << ',' << format_double(nodal.v0[i]) << ','
            << format_double(q[i]) << ',' << format_double(x_elem) << ','
            << format_double(state.h[i]) << ',' << format_double(state.u[i]) << ','
            << format_double(state.v[i]) << '\n';
    }
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

ConvergenceRow converge_one(RunConfig config, std::size_t n, double cycles) {
    config.mesh.n = n;
    config.testcase.name = TestCase::tc2;
    config.testcase.config.balance_fraction = 1.0;
    config.validate();
    const Mesh mesh = config.make_mesh();
    const Operators ops(mesh);
    const State initial = geostrophic_state(config.testcase.config, config.params, mesh);
    const auto time = config.time_config(mesh);
    const double t_end = cycles * cycle_time(mesh, config.params);
    auto result = run_simulation(initial, config.params, config.closure, time, t_end,
                                 std::numeric_limits<std::size_t>::max(), mesh, ops);
    if (!result.ok())
        throw NumericalFailure("convergence run at n = " + std::to_string(n) + " failed: " + *result.error);
    const State& s = result.samples.back().state;
    const auto nodal = close_state(config.closure, mesh, ops, s);

    const TestCaseProfile profile(config.testcase.config, config.params, mesh.length());
    const ScalarFunction h_ref = [&](double x) { return profile.height(x); };
    const ScalarFunction u_ref = [&](double x) { return profile.zonal_velocity(x); };
    const ScalarFunction v_ref = [&](double x) { return profile.slice_velocity(x); };

    ConvergenceRow row;
    row.n = n;
    row.l2_h_p0 = l2_error(s.h, h_ref, mesh);
    row.l2_u_p0 = l2_error(s.u, u_ref, mesh);
    row.l2_v_p0 = l2_error(s.v, v_ref, mesh);
    row.l2_h_p1 = l2_error(nodal.h0, h_ref, mesh);
    row.l2_u_p1 = l2_error(nodal.u0, u_ref, mesh);
    row.l2_v_p1 = l2_error(nodal.v0, v_ref, mesh);
    return row;
}

std::array<double, 6> columns(const ConvergenceRow& r) {
    return {r.l2_h_p0, r.l2_u_p0, r.l2_v_p0, r.l2_h_p1, r.l2_u_p1, r.l2_v_p1};
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json build_info() {
    return json{{"version", SPLITFEM_VERSION},
                {"git_rev", SPLITFEM_GIT_REV},
                {"compiler", __VERSION__},
                {"cxx_standard", __cplusplus}};
}

RunOutput cmd_run(const RunConfig& config) {
    config.validate();
    const Mesh mesh = config.make_mesh();
    const Operators ops(mesh);
    const State initial =
        initial_state(config.testcase.name, config.testcase.config, config.params, mesh);
    const auto time = config.time_config(mesh);
    const double t_end = config.t_end(mesh);

    RunOutput out;
    out.result = run_simulation(initial, config.params, config.closure, time, t_end,
                                config.time.sample_every, mesh, ops);

    const fs::path dir = output_dir(config);
    const std::string& prefix = config.output.prefix;
    out.diag_csv = dir / (prefix + "_diag.csv");
    write_diag_csv(out.diag_csv, out.result.samples);
    for (const auto& sample : out.result.samples) {
        fs::path p = dir / (prefix + "_fields_" + time_tag(sample.t) + ".csv");
        write_fields_csv(p, sample.state, config, mesh, ops);
        out.field_csvs.push_back(std::move(p));
    }

    json meta;
    meta["config"] = to_json(config);
    meta["build"] = build_info();
    meta["run"] = {{"dt", time.dt},
                   {"t_end", t_end},
                   {"steps", out.result.steps},
                   {"samples", out.result.samples.size()},
                   {"status", out.result.ok() ? "ok" : "failed"}};
    out.meta_json = dir / (prefix + "_meta.json");
    write_json_file(out.meta_json, meta);

    if (!out.result.ok()) {
        const double t_last = out.result.samples.empty() ? 0.0 : out.result.samples.back().t;
        write_json_file(dir / (prefix + "_error.json"),
                   json{{"error", *out.result.error}, {"steps", out.result.steps}, {"t_last_sample", t_last}});
        throw NumericalFailure(*out.result.error);
    }
    return out;
}

double fitted_order(const std::vector<std::size_t>& n, const std::vector<double>& err) {
    const std::size_t m = n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(static_cast<double>(n[i]));
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double md = static_cast<double>(m);
    return -(md * sxy - sx * sy) / (md * sxx - sx * sx);
}

ConvergenceTable cmd_converge(const RunConfig& config, const std::vector<std::size_t>& n_list,
                              double cycles, bool write_csv) {
    if (n_list.empty()) throw ConfigError("converge needs at least one mesh size");
    for (std::size_t n : n_list) {
        RunConfig c = config;
        c.mesh.n = n;
        c.testcase.name = TestCase::tc2;
        c.testcase.config.balance_fraction = 1.0;
        c.validate();
    }
    std::vector<std::future<ConvergenceRow>> jobs;
    for (std::size_t n : n_list)
        jobs.push_back(std::async(std::launch::async, converge_one, config, n, cycles));

    ConvergenceTable table;
    table.scheme = config.closure.label();
    for (auto& j : jobs) table.rows.push_back(j.get());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::array<double, 6> s;
        s.fill(nan);
        if (i > 0) {
            const auto a = columns(table.rows[i - 1]);
            const auto b = columns(table.rows[i]);
            const double ratio = static_cast<double>(table.rows[i].n) / static_cast<double>(table.rows[i - 1].n);
            for (int c = 0; c < 6; ++c) s[c] = std::log(a[c] / b[c]) / std::log(ratio);
        }
        table.slopes.push_back(s);
    }

    if (write_csv) {
        auto out = open_output(output_dir(config) / (config.output.prefix + "_converge.csv"));
        out << "n,l2_h_p0,l2_u_p0,l2_v_p0,l2_h_p1,l2_u_p1,l2_v_p1,"
               "slope_h_p0,slope_u_p0,slope_v_p0,slope_h_p1,slope_u_p1,slope_v_p1\n";
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            out << table.rows[i].n;
            for (double v : columns(table.rows[i])) out << ',' << format_double(v);
            for (double v : table.slopes[i]) out << ',' << (std::isnan(v) ? std::string() : format_double(v));
            out << '\n';
        }
    }
    return table;
}

DispersionTable cmd_dispersion(const RunConfig& config, const std::vector<ClosureSpec>& specs,
                               bool write_csv) {
    config.validate();
    const Mesh mesh = config.make_mesh();
    for (const auto& spec : specs) {
        if (spec.uses(ClosureKind::gp0) && mesh.size() % 2 == 0)
            throw ConfigError("dispersion spec " + spec.label() + " uses gp0, which needs odd mesh.n");
    }
    const Operators ops(mesh);
    const double c = config.params.wave_speed();
    const double dx = mesh.length() / static_cast<double>(mesh.size());

    DispersionTable table;
    const std::size_t k_max = mesh.size() / 2;
    table.omega_measured.resize(specs.size());
    for (const auto& spec : specs) table.specs.push_back(spec.label());
    for (std::size_t ki = 0; ki <= k_max; ++ki) {
        const double k = 2.0 * std::numbers::pi * static_cast<double>(ki) / mesh.length();
        table.k.push_back(k);
        table.omega_analytic_continuum.push_back(c * k);
        table.omega_avg_closed_form.push_back(
            dispersion_avg_analytic(k, config.params.g, config.params.h_mean, dx));
        for (std::size_t s = 0; s < specs.size(); ++s)
            table.omega_measured[s].push_back(dispersion_measured(specs[s], ki, mesh, ops, config.params).omega);
    }

    if (write_csv) {
        auto out = open_output(output_dir(config) / (config.output.prefix + "_dispersion.csv"));
        out << "k,omega_analytic_continuum,omega_avg_closed_form";
        for (const auto& label : table.specs) out << ",omega_" << label;
        out << '\n';
        for (std::size_t i = 0; i < table.k.size(); ++i) {
            out << format_double(table.k[i]) << ',' << format_double(table.omega_analytic_continuum[i]) << ','
                << format_double(table.omega_avg_closed_form[i]);
            for (const auto& col : table.omega_measured) out << ',' << format_double(col[i]);
            out << '\n';
        }
    }
    return table;
}

BenchResult cmd_bench(const RunConfig& config, std::size_t n_bench, std::size_t steps,
                      std::size_t repeats, bool write_json) {
    using clock = std::chrono::steady_clock;
    if (n_bench < 3 || steps == 0 || repeats == 0)
        throw ConfigError("bench needs n >= 3, steps >= 1 and repeats >= 1");

    const std::vector<ClosureSpec> specs = {ClosureSpec::parse("avg-avg"),
                                            ClosureSpec::parse("gp1-gp1"),
                                            ClosureSpec::parse("gp1-gp0")};
    BenchResult bench;
    bench.steps = steps;
    bench.repeats = repeats;

    for (const auto& spec : specs) {
        const std::size_t n = spec.uses(ClosureKind::gp0) && n_bench % 2 == 0 ? n_bench + 1 : n_bench;
        const Mesh mesh = Mesh::uniform(n, config.mesh.length);
        const Operators ops(mesh);
        State state = config.params.f != 0.0
                          ? geostrophic_state(config.testcase.config, config.params, mesh)
                          : unbalanced_state(config.testcase.config, config.params, mesh);
        State next = State::zeros(n);
        TendencyEvaluator eval(mesh, ops, config.params, spec);
        const RhsFunction rhs_fn = [&eval](const State& s, Tendency& k) { eval(s, k); };
        Rk4Stepper rk4(n);
        const double dt = default_time_step(mesh, config.params);

        BenchSpecResult r;
        r.scheme = spec.label();
        r.n = n;
        const long before = linear_solve_count();
        eval.close(state);
        r.closure_linear_solves = linear_solve_count() - before;

        const std::size_t warmup = std::min<std::size_t>(10, steps);
        for (std::size_t i = 0; i < warmup; ++i) {
            rk4.step(state, dt, rhs_fn, next);
            std::swap(state, next);
        }

        std::vector<double> closure_ns;
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            std::vector<double> step_ns(steps);
            for (std::size_t i = 0; i < steps; ++i) {
                const auto t0 = clock::now();
                rk4.step(state, dt, rhs_fn, next);
                const auto t1 = clock::now();
                std::swap(state, next);
                step_ns[i] = std::chrono::duration<double, std::nano>(t1 - t0).count();
            }
            r.step_ns_repeat_medians.push_back(median(step_ns));
            for (std::size_t i = 0; i < std::min<std::size_t>(steps, 200); ++i) {
                const auto t0 = clock::now();
                eval.close(state);
                const auto t1 = clock::now();
                closure_ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
            }
        }
        if (!state.all_finite()) throw NumericalFailure("benchmark state blew up for " + r.scheme);
        r.step_ns_median = median(r.step_ns_repeat_medians);
        r.closure_ns_median = median(closure_ns);
        bench.specs.push_back(std::move(r));
    }

    const auto& avg = bench.specs.front();
    for (std::size_t i = 1; i < bench.specs.size(); ++i) {
        const auto& s = bench.specs[i];
        bench.step_speedup[s.scheme + "/avg-avg"] = s.step_ns_median / avg.step_ns_median;
        bench.closure_speedup[s.scheme + "/avg-avg"] = s.closure_ns_median / avg.closure_ns_median;
    }

    if (write_json) {
        json j = to_json(bench);
        j["build"] = build_info();
        write_json_file(output_dir(config) / (config.output.prefix + "_bench.json"), j);
    }
    return bench;
}

json to_json(const BenchResult& bench) {
    json specs = json::array();
    for (const auto& s : bench.specs) {
        specs.push_back({{"scheme", s.scheme},
                         {"n", s.n},
                         {"closure_ns_median", s.closure_ns_median},
                         {"step_ns_median", s.step_ns_median},
                         {"step_ns_repeat_medians", s.step_ns_repeat_medians},
                         {"closure_linear_solves", s.closure_linear_solves}});
    }
    return json{{"steps", bench.steps},
                {"repeats", bench.repeats},
                {"specs", specs},
                {"step_speedup", bench.step_speedup},
                {"closure_speedup", bench.closure_speedup}};
}

}  // namespace splitfem::app
