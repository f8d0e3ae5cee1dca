#include "cevarep/alpha.hpp"
#include "cevarep/certify.hpp"
#include "cevarep/extract.hpp"
#include "cevarep/fracaffine.hpp"
#include "cevarep/mapdsl.hpp"

#include <benchmark/benchmark.h>

using namespace cevarep;

namespace {

void BM_Eval(benchmark::State& state) {
    const auto n = state.range(0);
    const auto f = random_fracaffine(n, n, 1);
    Rng rng(2);
    const Vec x = safe_region(f).sample(rng);
    for (auto _ : state) benchmark::DoNotOptimize(f.eval(x));
}
BENCHMARK(BM_Eval)->Arg(2)->Arg(8)->Arg(64);

void BM_DslEval(benchmark::State& state) {
    const auto o = compile(parse_map_spec("f1 := (2*x1 - x2 + 1)/(x1 + 3)\nf2 := (x2 + 0.5)/(x1 + 3)"));
    Vec x(2);
    x << 0.25, -0.5;
    for (auto _ : state) benchmark::DoNotOptimize(o.eval(x));
}
BENCHMARK(BM_DslEval);

void BM_ComputeAlpha(benchmark::State& state) {
    const auto f = random_fracaffine(3, 2, 3);
    const Oracle o = as_oracle(f, safe_region(f));
    Rng rng(4);
    const Vec x = o.region.sample(rng);
    const Vec y = o.region.sample(rng);
    for (auto _ : state) benchmark::DoNotOptimize(compute_alpha(o, x, y, 2.0).alpha);
}
BENCHMARK(BM_ComputeAlpha);

void BM_Certify(benchmark::State& state) {
    const Oracle o = zoo("random_fracaffine", {3, 2, 5, 1.0, ""});
    CertifyConfig cfg;
    cfg.trials = static_cast<int>(state.range(0));
    cfg.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(certify(o, cfg).verdict);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Certify)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State& state) {
    const auto n = state.range(0);
    const auto f = random_fracaffine(n, 2, 6);
    const Oracle o = as_oracle(f, safe_region(f));
    ExtractConfig cfg;
    cfg.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(extract_representation(o, cfg).validation_sup_error);
}
BENCHMARK(BM_Extract)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
