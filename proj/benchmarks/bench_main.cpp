#include <benchmark/benchmark.h>

#include <vector>

#include "minhash/analysis.hpp"
#include "minhash/bbit_model.hpp"
#include "minhash/estimators.hpp"
#include "minhash/hashing.hpp"
#include "minhash/mle.hpp"

using namespace minhash;

namespace {

SetRecord make_set(uint64_t n, uint64_t stride) {
    std::vector<uint64_t> xs(n);
    for (uint64_t i = 0; i < n; ++i) xs[i] = i * stride + 1;
    return SetRecord("bench", std::move(xs));
}

void BM_SketchMinwise(benchmark::State& state) {
    const SetRecord set = make_set(uint64_t(state.range(0)), 3);
    const HashFamily family(7, uint32_t(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(sketch_minwise(set, family));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_SketchMinwise)->Args({1024, 64})->Args({1024, 512})->Args({16384, 256});

void BM_SketchMinwiseSmallDomain(benchmark::State& state) {
    const SetRecord set = make_set(2048, 2);
    const HashFamily family(7, 256, UniverseConfig::of(10240));
    for (auto _ : state)
        benchmark::DoNotOptimize(sketch_minwise(set, family));
    state.SetItemsProcessed(state.iterations() * 2048 * 256);
}
BENCHMARK(BM_SketchMinwiseSmallDomain);

void BM_CompareBbit(benchmark::State& state) {
    const HashFamily family(11, 4096);
    const BBitSketch b1 = truncate_to_bbit(sketch_minwise(make_set(512, 3), family), 8);
    const BBitSketch b2 = truncate_to_bbit(sketch_minwise(make_set(512, 5), family), 8);
    for (auto _ : state)
        benchmark::DoNotOptimize(compare_bbit(b1, b2));
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_CompareBbit);

void BM_CellMatrixB8(benchmark::State& state) {
    const RateTriple rates(0.5, 0.25, 0.2);
    for (auto _ : state) {
        const BbitCellMatrix m(8, rates);
        double sum = 0;
        for (uint32_t t = 0; t < m.side(); ++t)
            for (uint32_t d = 0; d < m.side(); ++d) sum += m.cell(t, d);
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_CellMatrixB8);

void BM_EstimateMle3(benchmark::State& state) {
    const PairCounts3 counts{37, 411, 52};
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_mle3(counts, 171600, 10000));
}
BENCHMARK(BM_EstimateMle3);

void BM_SolveMleFullB8(benchmark::State& state) {
    const GroupingScheme scheme = make_scheme(Grouping::full, 8);
    const CellModel model = bbit_cell_model(scheme, 0.8, 0.16);
    const auto probs = grouped_probs(scheme, RateTriple(0.8, 0.16, 0.144));
    std::vector<uint64_t> counts(probs.size());
    for (size_t i = 0; i < probs.size(); ++i)
        counts[i] = uint64_t(probs[i] * 100000);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_mle(model, counts));
}
BENCHMARK(BM_SolveMleFullB8);

void BM_FisherInfoFullB8(benchmark::State& state) {
    const CellModel model = bbit_cell_model(make_scheme(Grouping::full, 8), 0.8, 0.16);
    for (auto _ : state)
        benchmark::DoNotOptimize(fisher_info(model, 0.144, 1));
}
BENCHMARK(BM_FisherInfoFullB8);

void BM_SimulationCounts(benchmark::State& state) {
    SimulationSpec spec{validate_ground_truth(171600, 10000, 9043)};
    spec.universe = UniverseConfig::of(10000000);
    spec.k_values = {500};
    spec.replications = 100;
    spec.estimators = {"standard", "mle"};
    for (auto _ : state)
        benchmark::DoNotOptimize(run_simulation(spec));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SimulationCounts);

}  // namespace

BENCHMARK_MAIN();
