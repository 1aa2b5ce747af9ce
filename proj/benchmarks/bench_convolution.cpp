#include <benchmark/benchmark.h>

#include <vector>

#include "network.hpp"
#include "uppnc/flowcontrol.hpp"
#include "uppnc/minimize.hpp"
#include "uppnc/minplus.hpp"
#include "uppnc/subadd.hpp"
#include "workload.hpp"

using namespace upp;

namespace {

// A fixed batch of operand pairs per class, shared by the baseline and
// optimized variants.
const std::vector<app::OperandPair>& pairs(app::OperandClass cls) {
    static std::vector<app::OperandPair> batches[3];
    auto& b = batches[static_cast<int>(cls)];
    if (b.empty()) {
        app::WorkloadGenerator gen(1000 + static_cast<int>(cls));
        for (int i = 0; i < 8; ++i) b.push_back(gen.next(cls));
    }
    return b;
}

void run_pairs(benchmark::State& state, bool optimized) {
    const auto& batch = pairs(static_cast<app::OperandClass>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        const app::OperandPair& p = batch[i++ % batch.size()];
        Curve h = optimized ? conv_optimized(p.cf, p.cg) : convolution(p.cf, p.cg);
        benchmark::DoNotOptimize(h);
    }
}

void BM_BaselineConvolution(benchmark::State& state) { run_pairs(state, false); }
void BM_OptimizedConvolution(benchmark::State& state) { run_pairs(state, true); }

const auto kClassArgs = {static_cast<long>(app::OperandClass::Dominance),
                         static_cast<long>(app::OperandClass::Asymptotic),
                         static_cast<long>(app::OperandClass::Incomparable)};

BENCHMARK(BM_BaselineConvolution)->ArgsProduct({kClassArgs})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizedConvolution)->ArgsProduct({kClassArgs})->Unit(benchmark::kMillisecond);

void BM_MinimizeFactorConvolution(benchmark::State& state) {
    Curve h = convolution(sac_rate_latency_jump(21, 32, 23), sac_rate_latency_jump(7, 44, 29));
    for (auto _ : state) benchmark::DoNotOptimize(minimize(h));
}
BENCHMARK(BM_MinimizeFactorConvolution)->Unit(benchmark::kMicrosecond);

void BM_GeneralClosure(benchmark::State& state) {
    Curve f = add_jump(make_rate_latency(16, 2), 20);
    for (auto _ : state) benchmark::DoNotOptimize(sac(f));
}
BENCHMARK(BM_GeneralClosure)->Unit(benchmark::kMicrosecond);

TandemSpec table_tandem(const char* name) {
    return app::parse_network(std::string(UPPNC_DATA_DIR) + "/" + name).tandem;
}

void BM_ExactPipeline(benchmark::State& state) {
    TandemSpec t = table_tandem("four_node_exact.net");
    PipelineOptions opt;
    opt.minimize = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(exact_equivalent(t, opt));
}
BENCHMARK(BM_ExactPipeline)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ApproxPipeline(benchmark::State& state) {
    TandemSpec t = table_tandem("four_node_approx.net");
    PipelineOptions opt;
    opt.minimize = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(approx_equivalent(t, opt));
}
BENCHMARK(BM_ApproxPipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
