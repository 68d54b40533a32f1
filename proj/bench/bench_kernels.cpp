// Serial reference versus OpenMP kernels.

#include "ucircle/harness.hpp"
#include "ucircle/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace ucircle;

namespace {

std::vector<MotionSegment> motions(std::size_t n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-100, 100), t(0, 5);
    std::vector<MotionSegment> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double t0 = t(rng);
        out.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}, t0, t0 + 1 + t(rng)});
    }
    return out;
}

std::vector<Point> points(std::size_t n) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-100, 100);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({u(rng), u(rng)});
    return out;
}

void BM_MinSeparationSerial(benchmark::State& st) {
    const auto m = motions(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::min_pairwise_separation_serial(m));
}

void BM_MinSeparationParallel(benchmark::State& st) {
    const auto m = motions(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::min_pairwise_separation(m));
}

void BM_SecBruteSerial(benchmark::State& st) {
    const auto p = points(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::sec_brute_force_serial(p));
}

void BM_SecBruteParallel(benchmark::State& st) {
    const auto p = points(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::sec_brute_force(p));
}

void BM_SecIncremental(benchmark::State& st) {
    const auto p = points(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(smallest_enclosing_circle(p));
}

// A batch of small scenarios, one job versus every available thread.
void BM_Batch(benchmark::State& st) {
    std::vector<harness::ScenarioConfig> cfgs;
    for (int s = 1; s <= 16; ++s) {
        harness::ScenarioConfig c;
        c.algorithm = harness::AlgorithmKind::global;
        c.n = 6;
        c.a = 4;
        c.scheduler = ScheduleKind::ssync;
        c.seed = static_cast<std::uint64_t>(s);
        c.max_cycles = 1200;
        c.fairness_bound = 18;
        c.placement.radius = 6;
        cfgs.push_back(c);
    }
    const int jobs = st.range(0) == 0 ? 1 : kernels::max_threads();
    for (auto _ : st) {
        std::vector<long> cycles(cfgs.size());
        kernels::parallel_for(cfgs.size(), jobs,
                              [&](std::size_t i) { cycles[i] = harness::run_scenario(cfgs[i]).summary.cycles_used; });
        benchmark::DoNotOptimize(cycles.data());
    }
    st.counters["jobs"] = jobs;
}

}  // namespace

BENCHMARK(BM_MinSeparationSerial)->Arg(16)->Arg(128)->Arg(1024);
BENCHMARK(BM_MinSeparationParallel)->Arg(16)->Arg(128)->Arg(1024);
BENCHMARK(BM_SecBruteSerial)->Arg(8)->Arg(24)->Arg(48);
BENCHMARK(BM_SecBruteParallel)->Arg(8)->Arg(24)->Arg(48);
BENCHMARK(BM_SecIncremental)->Arg(8)->Arg(24)->Arg(48);
BENCHMARK(BM_Batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
