#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitfem/errors.hpp"
#include "splitfem_app/commands.hpp"
#include "splitfem_app/config.hpp"

namespace {

using namespace splitfem;
using namespace splitfem::app;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", c.overrides, "Override a config entry, key.path=value (repeatable)")
        ->allow_extra_args(false);
}

void print_converge(const ConvergenceTable& t) {
    std::printf("scheme %s\n%8s %12s %12s %12s %12s %12s %12s\n", t.scheme.c_str(), "n", "h_p0", "u_p0",
                "v_p0", "h_p1", "u_p1", "v_p1");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        std::printf("%8zu %12.4e %12.4e %12.4e %12.4e %12.4e %12.4e\n", r.n, r.l2_h_p0, r.l2_u_p0,
                    r.l2_v_p0, r.l2_h_p1, r.l2_u_p1, r.l2_v_p1);
        if (i > 0) {
            const auto& s = t.slopes[i];
            std::printf("%8s %12.2f %12.2f %12.2f %12.2f %12.2f %12.2f\n", "slope", s[0], s[1], s[2], s[3],
                        s[4], s[5]);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split compatible finite element rotating shallow water (1D slice)"};
    app.require_subcommand(1);

    Common run_opts, conv_opts, disp_opts, bench_opts;
    auto* run = app.add_subcommand("run", "Simulate a test case and write diagnostics and fields");
    add_common(run, run_opts);

    auto* conv = app.add_subcommand("converge", "L2 error convergence of the balanced steady state");
    add_common(conv, conv_opts);
    std::vector<std::size_t> conv_n{64, 128, 256, 512, 1024};
    double cycles = 1.0;
    conv->add_option("--n", conv_n, "Mesh sizes")->delimiter(',');
    conv->add_option("--cycles", cycles, "Run length in gravity-wave crossing times")
        ->check(CLI::PositiveNumber);

    auto* disp = app.add_subcommand("dispersion", "Measured linear dispersion relations");
    add_common(disp, disp_opts);
    std::vector<std::string> disp_specs{"avg-avg", "gp1-gp1"};
    disp->add_option("--specs", disp_specs, "Closure labels <velocity>-<height>")->delimiter(',');

    auto* bench = app.add_subcommand("bench", "Time the closure stage and a full RK4 step");
    add_common(bench, bench_opts);
    std::size_t bench_n = 131072;
    std::size_t bench_steps = 1000;
    std::size_t bench_repeats = 3;
    bench->add_option("--n", bench_n, "Elements (gp0 specs use n + 1)");
    bench->add_option("--steps", bench_steps, "Timed steps per repeat");
    bench->add_option("--repeats", bench_repeats, "Repeats");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            const auto config = load_config(run_opts.config_path, run_opts.overrides);
            const auto out = cmd_run(config);
            std::cout << "wrote " << out.diag_csv.string() << " (" << out.result.steps << " steps, "
                      << out.field_csvs.size() << " field snapshots)\n";
        } else if (*conv) {
            auto overrides = conv_opts.overrides;
            if (!conv_n.empty()) overrides.push_back("mesh.n=" + std::to_string(conv_n.front()));
            const auto config = load_config(conv_opts.config_path, overrides);
            print_converge(cmd_converge(config, conv_n, cycles));
        } else if (*disp) {
            const auto config = load_config(disp_opts.config_path, disp_opts.overrides);
            std::vector<ClosureSpec> specs;
            for (const auto& s : disp_specs) {
                try {
                    specs.push_back(ClosureSpec::parse(s));
                } catch (const ValidationError& e) {
                    throw ConfigError(e.what());
                }
            }
            const auto table = cmd_dispersion(config, specs);
            std::cout << "wrote " << table.k.size() << " wavenumbers for " << specs.size() << " specs\n";
        } else if (*bench) {
            const auto config = load_config(bench_opts.config_path, bench_opts.overrides);
            const auto result = cmd_bench(config, bench_n, bench_steps, bench_repeats);
            for (const auto& s : result.specs)
                std::printf("%-8s n=%-7zu step %.4g ms  closure %.4g us  solves/closure %ld\n", s.scheme.c_str(),
                            s.n, s.step_ns_median * 1e-6, s.closure_ns_median * 1e-3, s.closure_linear_solves);
            for (const auto& [key, ratio] : result.step_speedup)
                std::printf("step time ratio %s = %.3f\n", key.c_str(), ratio);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const splitfem::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
