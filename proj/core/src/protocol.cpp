#include "dielwave/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dielwave/errors.hpp"
#include "dielwave/ingest.hpp"
#include "dielwave/parallel.hpp"
#include "dielwave/stats.hpp"

namespace dielwave {

PreparedDataset prepare_dataset(std::vector<LabeledSeries> series, const PeriodConfig& period,
                                int step, const FeatureConfig& features, int jobs) {
  period.validate();
  WindowSets sets = extract_windows(series, period, step);
  std::vector<WindowLabel> labels;
  labels.reserve(sets.size());
  for (const auto& w : sets.windows) labels.push_back(w.label);
  FeatureMatrix stats = statistical_feature_matrix(sets.windows, features.statistics, jobs);
  WaveletTransformCache cache(sets.windows, features.specs, features.wavelet, jobs);
  return PreparedDataset{std::move(series), period,           step,
                         std::move(sets),   std::move(labels), std::move(stats),
                         std::move(cache)};
}

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

FeatureMatrix candidate_matrix(const PreparedDataset& data, const Split& split, bool with_wavelets,
                               const FeatureConfig& features) {
  if (!with_wavelets || features.specs.empty()) return data.statistics;
  const ReferencePeriod ref = build_reference(data.sets.windows, split.train, data.period,
                                              features.specs, features.wavelet);
  const auto rows = all_rows(data.sets.size());
  FeatureMatrix wav = wavelet_feature_matrix(data.sets.windows, rows, data.wavelets, ref);
  return FeatureMatrix::hconcat(wav, data.statistics);
}

}  // namespace

SplitFeatures split_features(const PreparedDataset& data, const Split& split, bool with_wavelets,
                             const FeatureConfig& features) {
  FeatureMatrix full = candidate_matrix(data, split, with_wavelets, features);
  SplitFeatures out;
  out.candidates = full.names();
  if (features.prune && split.train.size() >= 2) {
    out.prune = prune_correlated(full.select_rows(split.train), features.prune_threshold);
  } else {
    out.prune.retained = full.names();
  }
  out.matrix = full.select_columns(out.prune.retained);
  return out;
}

FeatureMatrix split_features_fixed(const PreparedDataset& data, const Split& split,
                                   std::span<const std::string> columns,
                                   const FeatureConfig& features) {
  const bool needs_wavelets = std::any_of(columns.begin(), columns.end(), [&](const auto& c) {
    return std::none_of(data.statistics.names().begin(), data.statistics.names().end(),
                        [&](const auto& s) { return s == c; });
  });
  return candidate_matrix(data, split, needs_wavelets, features).select_columns(columns);
}

std::uint64_t split_seed(std::uint64_t base_seed, int split) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(split));
}

std::uint64_t forest_seed(std::uint64_t split_seed_value, int iteration, bool reseed_each_iteration) {
  const int stream = reseed_each_iteration ? iteration : 0;
  return mix_seed(split_seed_value ^ 0x5eedf0e5u, static_cast<std::uint64_t>(stream) + 1);
}

std::vector<const SplitRun*> ProtocolResult::runs_for(bool with_wavelets) const {
  std::vector<const SplitRun*> out;
  for (const auto& r : runs) {
    if (r.with_wavelets == with_wavelets) out.push_back(&r);
  }
  return out;
}

namespace {

Metrics mean_of_metrics(std::span<const IterationResult> iterations) {
  auto avg = [&](auto member) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& it : iterations) {
      if (const auto v = it.metrics.*member) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  return {avg(&Metrics::recall), avg(&Metrics::precision), avg(&Metrics::accuracy),
          avg(&Metrics::f1)};
}

SplitRun run_split(const PreparedDataset& data, const ProtocolConfig& config, const Split& split,
                   int split_index, bool with_wavelets) {
  SplitRun run;
  run.split = split_index;
  run.split_seed = split.seed;
  run.with_wavelets = with_wavelets;
  run.normals_exhausted = split.normals_exhausted;
  run.train = split.train;
  run.test = split.test;
  if (split.train.empty()) {
    throw ConfigError("split " + std::to_string(split_index) + " has no training windows");
  }

  SplitFeatures feats = split_features(data, split, with_wavelets, config.features);
  run.features = feats.matrix.names();
  run.prune = std::move(feats.prune);
  const FeatureMatrix train = feats.matrix.select_rows(split.train);
  const FeatureMatrix test = feats.matrix.select_rows(split.test);
  std::vector<WindowLabel> truth;
  truth.reserve(split.test.size());
  for (std::size_t i : split.test) truth.push_back(data.labels[i]);

  const auto& proto = config.protocol;
  std::vector<double> accuracies;
  ForestModel model;
  for (int it = 0; it < proto.max_iterations; ++it) {
    ForestParams params = config.forest;
    params.jobs = 1;
    params.seed = forest_seed(split.seed, it, config.reseed_each_iteration);
    model = fit(train, params);
    const auto verdicts = decide(model, model.anomaly_scores(test));
    IterationResult r;
    r.iteration = it;
    r.forest_seed = params.seed;
    r.counts = confusion(truth, verdicts);
    r.metrics = metrics(r.counts);
    run.iterations.push_back(r);
    // An undefined accuracy (no scored window) cannot move the running mean.
    accuracies.push_back(r.metrics.accuracy.value_or(0.0));
    if (accuracy_stabilized(accuracies, proto.stabilization_epsilon, proto.stabilization_window)) {
      run.stabilized = true;
      break;
    }
  }
  run.mean_metrics = mean_of_metrics(run.iterations);
  run.score_threshold = model.score_threshold();
  if (config.keep_verdicts) run.window_verdicts = decide(model, model.anomaly_scores(feats.matrix));
  return run;
}

MetricSummary summarize_metric(std::span<const SplitRun* const> runs,
                               std::optional<double> Metrics::*member) {
  std::vector<double> values;
  for (const SplitRun* r : runs) {
    if (const auto v = r->mean_metrics.*member) values.push_back(*v);
  }
  MetricSummary s;
  s.n = values.size();
  if (!values.empty()) {
    s.mean = mean(values);
    s.std = sample_stddev(values);
  }
  return s;
}

}  // namespace

ConditionSummary summarize_condition(std::span<const SplitRun* const> runs, bool with_wavelets) {
  ConditionSummary s;
  s.with_wavelets = with_wavelets;
  s.accuracy = summarize_metric(runs, &Metrics::accuracy);
  s.recall = summarize_metric(runs, &Metrics::recall);
  s.precision = summarize_metric(runs, &Metrics::precision);
  s.f1 = summarize_metric(runs, &Metrics::f1);
  double iters = 0.0;
  for (const SplitRun* r : runs) {
    iters += static_cast<double>(r->iterations.size());
    if (r->normals_exhausted) ++s.exhausted_splits;
  }
  if (!runs.empty()) s.mean_iterations = iters / static_cast<double>(runs.size());
  return s;
}

ProtocolResult run_protocol(const PreparedDataset& data, const ProtocolConfig& config) {
  config.protocol.validate();
  config.forest.validate();
  if (config.with_wavelets.empty()) throw ConfigError("run_protocol: no feature condition requested");
  if (data.sets.abnormal.empty()) {
    throw ArgumentError("run_protocol: the dataset has no abnormal window");
  }
  const auto n_splits = static_cast<std::size_t>(config.protocol.n_splits);
  const std::size_t n_cond = config.with_wavelets.size();
  std::vector<SplitRun> runs(n_splits * n_cond);
  parallel_for(n_splits, config.jobs, [&](std::size_t s) {
    const Split split = build_train_test(data.sets, split_seed(config.base_seed, static_cast<int>(s)),
                                         data.step);
    for (std::size_t c = 0; c < n_cond; ++c) {
      runs[s * n_cond + c] =
          run_split(data, config, split, static_cast<int>(s), config.with_wavelets[c]);
    }
  });

  ProtocolResult result;
  result.runs = std::move(runs);
  std::vector<bool> seen;
  for (bool w : config.with_wavelets) {
    if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
    seen.push_back(w);
    const auto subset = result.runs_for(w);
    result.summaries.push_back(summarize_condition(subset, w));
  }
  return result;
}

std::vector<PredictedStateSeries> predicted_states_for(const PreparedDataset& data,
                                                       std::span<const Verdict> window_verdicts,
                                                       const DetectionConfig& config) {
  if (window_verdicts.size() != data.sets.size()) {
    throw ArgumentError("predicted_states_for: one verdict per window expected");
  }
  std::vector<std::vector<WindowVerdict>> per_series(data.series.size());
  for (std::size_t i = 0; i < data.sets.size(); ++i) {
    const Window& w = data.sets.windows[i];
    per_series[w.series_index].push_back({w.start_index, window_verdicts[i]});
  }
  std::vector<PredictedStateSeries> out;
  out.reserve(data.series.size());
  for (std::size_t s = 0; s < data.series.size(); ++s) {
    const auto& series = data.series[s];
    out.push_back(predicted_states(per_series[s], series.size(), data.period.window_size,
                                   series.start(), config.theta, config.quorum));
  }
  return out;
}

DetectionSummary analyze_detections(const PreparedDataset& data,
                                    std::span<const SplitRun* const> runs,
                                    const DetectionConfig& config) {
  DetectionSummary summary;
  const auto annotated = abnormal_days(data.series);
  std::vector<std::map<int, double>> histograms;
  std::vector<double> in_range;
  bool availability_done = false;

  for (const SplitRun* run : runs) {
    if (run->window_verdicts.empty()) continue;
    const auto states = predicted_states_for(data, run->window_verdicts, config);
    if (!availability_done) {
      // Coverage does not depend on the verdicts, so any split gives the same days.
      for (std::size_t s = 0; s < states.size(); ++s) {
        std::vector<Day> covered;
        for (std::size_t d = 0; d < states[s].days.size(); ++d) {
          if (states[s].day_verdicts[d]) covered.push_back(states[s].days[d]);
        }
        accumulate_availability(covered, annotated[s], config.tie, summary.availability);
      }
      availability_done = true;
    }
    std::vector<int> offsets;
    for (std::size_t s = 0; s < states.size(); ++s) {
      std::vector<Day> detected;
      for (std::size_t d = 0; d < states[s].days.size(); ++d) {
        if (states[s].day_verdicts[d] == Verdict::Abnormal) detected.push_back(states[s].days[d]);
      }
      const auto dd = distance_of_detection(detected, annotated[s], config.tie);
      offsets.insert(offsets.end(), dd.offsets.begin(), dd.offsets.end());
      summary.unmatched += dd.unmatched.size();
      summary.detections += detected.size();
    }
    histograms.push_back(normalized_histogram(offsets, summary.availability));
    if (const auto f = fraction_in_range(offsets, config.range_lo, config.range_hi)) {
      in_range.push_back(*f);
    }
    ++summary.splits;
  }

  for (const auto& [offset, days] : summary.availability) {
    if (days == 0) continue;
    std::vector<double> v;
    for (const auto& h : histograms) v.push_back(h.at(offset));
    summary.histogram_mean[offset] = mean(v);
    summary.histogram_std[offset] = sample_stddev(v);
  }
  if (!in_range.empty()) {
    summary.in_range_mean = mean(in_range);
    summary.in_range_std = sample_stddev(in_range);
  }
  return summary;
}

AttributionResult run_attribution(const PreparedDataset& data, const ProtocolConfig& protocol,
                                  const AttributionConfig& config) {
  if (config.n_splits < 1 || config.iterations < 1 || config.windows_per_run < 1 ||
      config.background_rows < 1 || config.permutations < 1) {
    throw ConfigError("attribution: splits, iterations, windows, background and permutations must be positive");
  }
  protocol.forest.validate();
  if (data.sets.abnormal.empty()) {
    throw ArgumentError("run_attribution: the dataset has no abnormal window");
  }
  const auto n_splits = static_cast<std::size_t>(config.n_splits);
  std::vector<Split> splits;
  for (std::size_t s = 0; s < n_splits; ++s) {
    splits.push_back(
        build_train_test(data.sets, split_seed(protocol.base_seed, static_cast<int>(s)), data.step));
    if (splits.back().train.empty()) {
      throw ConfigError("attribution split " + std::to_string(s) + " has no training windows");
    }
  }
  const std::vector<std::string> catalog =
      split_features(data, splits.front(), config.with_wavelets, protocol.features).matrix.names();
  const std::size_t n_features = catalog.size();
  const auto n_iter = static_cast<std::size_t>(config.iterations);

  std::vector<std::vector<double>> per_run_abs(n_splits * n_iter);
  std::vector<std::vector<double>> per_run_signed(n_splits * n_iter);
  parallel_for(n_splits, protocol.jobs, [&](std::size_t s) {
    const Split& split = splits[s];
    const FeatureMatrix all = split_features_fixed(data, split, catalog, protocol.features);
    const FeatureMatrix train = all.select_rows(split.train);
    for (std::size_t it = 0; it < n_iter; ++it) {
      ForestParams params = protocol.forest;
      params.jobs = 1;
      params.seed = forest_seed(split.seed, static_cast<int>(it), true);
      const ForestModel model = fit(train, params);

      std::mt19937_64 rng(mix_seed(params.seed, 0xa77));
      auto sample = [&](const std::vector<std::size_t>& pool, int k) {
        std::vector<std::size_t> picked = pool;
        std::shuffle(picked.begin(), picked.end(), rng);
        picked.resize(std::min<std::size_t>(picked.size(), static_cast<std::size_t>(k)));
        std::sort(picked.begin(), picked.end());
        return picked;
      };
      const auto bg_rows = sample(split.train, config.background_rows);
      const auto explain = sample(split.test, config.windows_per_run);
      const FeatureMatrix background = all.select_rows(bg_rows);

      std::vector<double> abs_sum(n_features, 0.0);
      std::vector<double> signed_sum(n_features, 0.0);
      for (std::size_t k = 0; k < explain.size(); ++k) {
        const auto est = shapley_scores(model, all.row(explain[k]), background, config.permutations,
                                        mix_seed(params.seed, 0x5a9 + k));
        for (std::size_t f = 0; f < n_features; ++f) {
          abs_sum[f] += std::abs(est.values[f]);
          signed_sum[f] += est.values[f];
        }
      }
      const double n = static_cast<double>(std::max<std::size_t>(explain.size(), 1));
      for (std::size_t f = 0; f < n_features; ++f) {
        abs_sum[f] /= n;
        signed_sum[f] /= n;
      }
      per_run_abs[s * n_iter + it] = std::move(abs_sum);
      per_run_signed[s * n_iter + it] = std::move(signed_sum);
    }
  });
  return summarize_attribution(catalog, per_run_abs, per_run_signed, config.alpha,
                               config.rank_by_signed);
}

}  // namespace dielwave
