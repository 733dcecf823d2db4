#include <benchmark/benchmark.h>

#include <vector>

#include "splitfem/closures.hpp"
#include "splitfem/dynamics.hpp"
#include "splitfem/integrators.hpp"
#include "splitfem/testcases.hpp"

namespace {

using namespace splitfem;

ModelParams params() {
    ModelParams p;
    p.f = 1.0;
    return p;
}

std::size_t elements(benchmark::State& st, bool gp0) {
    auto n = static_cast<std::size_t>(st.range(0));
    if (gp0 && n % 2 == 0) ++n;
    return n;
}

void closure(benchmark::State& st, ClosureKind kind) {
    const std::size_t n = elements(st, kind == ClosureKind::gp0);
    const Mesh mesh = Mesh::uniform(n, 1.0);
    const Operators ops(mesh);
    const State s = geostrophic_state(TestCaseConfig{}, params(), mesh);
    std::vector<double> out(n);
    for (auto _ : st) {
        close_to_nodal(kind, mesh, ops, s.h.values(), out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}

void tendency(benchmark::State& st, const char* label) {
    const ClosureSpec spec = ClosureSpec::parse(label);
    const std::size_t n = elements(st, spec.uses(ClosureKind::gp0));
    const Mesh mesh = Mesh::uniform(n, 1.0);
    const Operators ops(mesh);
    const State s = geostrophic_state(TestCaseConfig{}, params(), mesh);
    TendencyEvaluator eval(mesh, ops, params(), spec);
    Tendency k = Tendency::zeros(n);
    for (auto _ : st) {
        eval(s, k);
        benchmark::DoNotOptimize(k.dh[0]);
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}

void rk4(benchmark::State& st, const char* label) {
    const ClosureSpec spec = ClosureSpec::parse(label);
    const std::size_t n = elements(st, spec.uses(ClosureKind::gp0));
    const Mesh mesh = Mesh::uniform(n, 1.0);
    const Operators ops(mesh);
    const ModelParams p = params();
    State a = geostrophic_state(TestCaseConfig{}, p, mesh);
    State b = a;
    TendencyEvaluator eval(mesh, ops, p, spec);
    const RhsFunction fn = [&eval](const State& s, Tendency& k) { eval(s, k); };
    Rk4Stepper stepper(n);
    const double dt = default_time_step(mesh, p);
    for (auto _ : st) {
        stepper.step(a, dt, fn, b);
        std::swap(a, b);
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}

constexpr std::int64_t kMin = 1 << 10;
constexpr std::int64_t kMax = 1 << 17;

BENCHMARK_CAPTURE(closure, avg, ClosureKind::avg)->RangeMultiplier(8)->Range(kMin, kMax);
BENCHMARK_CAPTURE(closure, gp1, ClosureKind::gp1)->RangeMultiplier(8)->Range(kMin, kMax);
BENCHMARK_CAPTURE(closure, gp0, ClosureKind::gp0)->RangeMultiplier(8)->Range(kMin, kMax);

BENCHMARK_CAPTURE(tendency, avg_avg, "avg-avg")->RangeMultiplier(8)->Range(kMin, kMax);
BENCHMARK_CAPTURE(tendency, gp1_gp1, "gp1-gp1")->RangeMultiplier(8)->Range(kMin, kMax);
BENCHMARK_CAPTURE(tendency, gp1_gp0, "gp1-gp0")->RangeMultiplier(8)->Range(kMin, kMax);

BENCHMARK_CAPTURE(rk4, avg_avg, "avg-avg")->RangeMultiplier(8)->Range(kMin, kMax);
BENCHMARK_CAPTURE(rk4, gp1_gp1, "gp1-gp1")->RangeMultiplier(8)->Range(kMin, kMax);

}  // namespace

BENCHMARK_MAIN();
