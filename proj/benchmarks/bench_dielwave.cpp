#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "dielwave/attribution.hpp"
#include "dielwave/features.hpp"
#include "dielwave/iforest.hpp"
#include "dielwave/wavelet.hpp"

using namespace dielwave;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

std::vector<Window> windows(std::size_t n) {
  std::vector<Window> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].values = noise(24, i);
    out[i].start_hour_of_period = static_cast<int>(i % 24);
  }
  return out;
}

FeatureMatrix gaussian(std::size_t rows, std::size_t cols) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("f" + std::to_string(c));
  FeatureMatrix m(names);
  for (std::size_t r = 0; r < rows; ++r) m.append_row(noise(cols, r));
  return m;
}

}  // namespace

static void BM_DwtApprox(benchmark::State& state) {
  const auto x = noise(24, 1);
  const WaveletSpec spec{static_cast<WaveletFamily>(state.range(0)), 2};
  for (auto _ : state) benchmark::DoNotOptimize(dwt_approx(x, spec));
}
BENCHMARK(BM_DwtApprox)->DenseRange(0, 8);

static void BM_DwtRoundTrip(benchmark::State& state) {
  const auto x = noise(24, 2);
  const auto specs = default_wavelet_catalog();
  for (auto _ : state) {
    for (const auto& s : specs) benchmark::DoNotOptimize(idwt(dwt_full(x, s), s.family));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(specs.size()));
}
BENCHMARK(BM_DwtRoundTrip);

static void BM_StatisticalFeatures(benchmark::State& state) {
  const auto w = windows(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(statistical_feature_matrix(w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StatisticalFeatures)->Arg(1000)->Arg(10000);

static void BM_WaveletFeatures(benchmark::State& state) {
  const auto w = windows(static_cast<std::size_t>(state.range(0)));
  std::vector<std::size_t> rows(w.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto specs = default_wavelet_catalog();
  const WaveletTransformCache cache(w, specs);
  for (auto _ : state) {
    const auto ref = build_reference(w, rows, PeriodConfig{}, specs);
    benchmark::DoNotOptimize(wavelet_feature_matrix(w, rows, cache, ref));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WaveletFeatures)->Arg(1000)->Arg(10000);

static void BM_Prune(benchmark::State& state) {
  const auto m = gaussian(static_cast<std::size_t>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(prune_correlated(m));
}
BENCHMARK(BM_Prune)->Arg(2000)->Arg(20000);

static void BM_ForestFit(benchmark::State& state) {
  const auto m = gaussian(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(fit(m, ForestParams{.n_trees = 100}));
}
BENCHMARK(BM_ForestFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ForestScore(benchmark::State& state) {
  const auto train = gaussian(5000, 30);
  const auto model = fit(train, ForestParams{.n_trees = 100});
  const auto probe = gaussian(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(model.anomaly_scores(probe));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestScore)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Shapley(benchmark::State& state) {
  const auto train = gaussian(2000, 30);
  const auto model = fit(train, ForestParams{.n_trees = 100});
  const auto x = noise(30, 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shapley_scores(model, x, train, static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_Shapley)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
