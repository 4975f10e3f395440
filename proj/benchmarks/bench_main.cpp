#include <benchmark/benchmark.h>

#include "unilab/correlations.hpp"
#include "unilab/expsum.hpp"
#include "unilab/pretend.hpp"
#include "unilab/sieve.hpp"

using namespace unilab;

static void BM_SieveLiouville(benchmark::State& state) {
    const auto len = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto t = sieve_range(TableKind::liouville, 1'000'000'000, 1'000'000'000 + len);
        benchmark::DoNotOptimize(t);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * len));
}
BENCHMARK(BM_SieveLiouville)->Arg(1 << 16)->Arg(1 << 20);

static void BM_SupAlpha(benchmark::State& state) {
    const std::int64_t H = state.range(0);
    const auto c = interval_values(FunctionSpec::liouville(), {1'000'000, H});
    for (auto _ : state) benchmark::DoNotOptimize(sup_alpha_coeffs(c, 0.01));
}
BENCHMARK(BM_SupAlpha)->Arg(64)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_TripleSpectral(benchmark::State& state) {
    const std::int64_t X = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(triple_spectral(FunctionSpec::liouville(), SequenceSpec::mangoldt(),
                                                 SequenceSpec::one(), X, 32));
}
BENCHMARK(BM_TripleSpectral)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_TripleDirect(benchmark::State& state) {
    const std::int64_t X = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(triple_direct(FunctionSpec::liouville(), SequenceSpec::mangoldt(),
                                               SequenceSpec::one(), X, 32));
}
BENCHMARK(BM_TripleDirect)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_Distance(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(pretentious_distance(FunctionSpec::liouville(), 10'000, 4, 30.0, 1e-4));
}
BENCHMARK(BM_Distance)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
