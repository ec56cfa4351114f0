#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dielwave/attribution.hpp"
#include "dielwave/core_model.hpp"
#include "dielwave/evaluation.hpp"
#include "dielwave/feature_matrix.hpp"
#include "dielwave/features.hpp"
#include "dielwave/iforest.hpp"
#include "dielwave/wavelet.hpp"
#include "dielwave/windowing.hpp"

namespace dielwave {

struct FeatureConfig {
  std::vector<WaveletSpec> specs = default_wavelet_catalog();
  WaveletFeatureOptions wavelet;
  StatisticalOptions statistics;
  bool prune = true;
  double prune_threshold = 0.9;
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// Windows of a dataset together with everything about them that does not
/// depend on the split: statistical features and per-window wavelet
/// transforms.
struct PreparedDataset {
  std::vector<LabeledSeries> series;
  PeriodConfig period;
  int step = 1;
  WindowSets sets;
  std::vector<WindowLabel> labels;  // per window
  FeatureMatrix statistics;         // one row per window
  WaveletTransformCache wavelets;
};

PreparedDataset prepare_dataset(std::vector<LabeledSeries> series, const PeriodConfig& period,
                                int step, const FeatureConfig& features, int jobs = 1);

/// Feature matrix of one split, with the reference period built from the
/// training windows and pruning decided on the training rows only.
struct SplitFeatures {
  std::vector<std::string> candidates;  // before pruning
  PruneResult prune;
  FeatureMatrix matrix;  // retained columns, one row per window of the dataset
};

SplitFeatures split_features(const PreparedDataset& data, const Split& split, bool with_wavelets,
                             const FeatureConfig& features);

/// Restricts split_features to a fixed column list (used when several splits
/// must share one catalog).
FeatureMatrix split_features_fixed(const PreparedDataset& data, const Split& split,
                                   std::span<const std::string> columns,
                                   const FeatureConfig& features);

struct ProtocolConfig {
  ExperimentProtocol protocol;
  ForestParams forest;  // seed is derived per split and iteration
  /// Fresh forest seed at every iteration; when false every iteration of a
  /// split refits with the same seed, which makes the scorer deterministic.
  bool reseed_each_iteration = true;
  FeatureConfig features;
  /// Feature conditions to run on the same splits.
  std::vector<bool> with_wavelets = {true, false};
  std::uint64_t base_seed = 0;
  int jobs = 0;
  /// Keep the final model's verdict for every window of every split.
  bool keep_verdicts = true;
  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

std::uint64_t split_seed(std::uint64_t base_seed, int split);
std::uint64_t forest_seed(std::uint64_t split_seed, int iteration, bool reseed_each_iteration);

struct IterationResult {
  int iteration = 0;
  std::uint64_t forest_seed = 0;
  ConfusionCounts counts;
  Metrics metrics;
};

struct SplitRun {
  int split = 0;
  std::uint64_t split_seed = 0;
  bool with_wavelets = true;
  bool normals_exhausted = false;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::string> features;  // retained
  PruneResult prune;
  std::vector<IterationResult> iterations;
  bool stabilized = false;
  Metrics mean_metrics;  // per-metric mean over the iterations where it is defined
  double score_threshold = 0.0;
  std::vector<Verdict> window_verdicts;  // final model, all windows
};

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> std;  // sample std across splits
  std::size_t n = 0;           // splits where the metric is defined
};

struct ConditionSummary {
  bool with_wavelets = true;
  MetricSummary accuracy;
  MetricSummary recall;
  MetricSummary precision;
  MetricSummary f1;
  double mean_iterations = 0.0;
  std::size_t exhausted_splits = 0;
};

struct ProtocolResult {
  std::vector<SplitRun> runs;  // ordered by (split, condition)
  std::vector<ConditionSummary> summaries;

  std::vector<const SplitRun*> runs_for(bool with_wavelets) const;
};

/// Splits x iterations for every requested feature condition. Conditions
/// share split seeds and forest seeds. Requires at least one abnormal window.
ProtocolResult run_protocol(const PreparedDataset& data, const ProtocolConfig& config);

ConditionSummary summarize_condition(std::span<const SplitRun* const> runs, bool with_wavelets);

struct DetectionConfig {
  double theta = 0.0;
  int quorum = 12;
  TieRule tie = TieRule::Earlier;
  int range_lo = -3;
  int range_hi = 1;
  friend bool operator==(const DetectionConfig&, const DetectionConfig&) = default;
};

/// Per-series predicted states from one split's window verdicts.
std::vector<PredictedStateSeries> predicted_states_for(const PreparedDataset& data,
                                                       std::span<const Verdict> window_verdicts,
                                                       const DetectionConfig& config);

struct DetectionSummary {
  std::map<int, std::size_t> availability;  // covered days per offset
  std::map<int, double> histogram_mean;     // across splits
  std::map<int, double> histogram_std;
  std::optional<double> in_range_mean;
  std::optional<double> in_range_std;
  std::size_t detections = 0;
  std::size_t unmatched = 0;
  std::size_t splits = 0;
};

DetectionSummary analyze_detections(const PreparedDataset& data,
                                    std::span<const SplitRun* const> runs,
                                    const DetectionConfig& config);

struct AttributionConfig {
  int n_splits = 10;
  int iterations = 50;
  int windows_per_run = 20;
  int background_rows = 50;
  int permutations = 100;
  double alpha = 0.05;
  bool rank_by_signed = false;
  bool with_wavelets = true;
  friend bool operator==(const AttributionConfig&, const AttributionConfig&) = default;
};

/// One run per (split, iteration): fit, then average Shapley values over a
/// sample of test windows. The catalog is fixed by pruning the first split's
/// training rows so that ranks are comparable across runs.
AttributionResult run_attribution(const PreparedDataset& data, const ProtocolConfig& protocol,
                                  const AttributionConfig& config);

}  // namespace dielwave
