#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dielwave/feature_matrix.hpp"
#include "dielwave/iforest.hpp"

namespace dielwave {

using ScoreFunction = std::function<double(std::span<const double>)>;

struct ShapleyEstimate {
  std::vector<double> values;      // one per feature
  std::vector<double> std_errors;  // Monte-Carlo standard error per feature
  double score = 0.0;              // f(x)
  double baseline = 0.0;           // mean f over the whole background
  /// Standard error of the sampled-background mean; sum(values) equals
  /// score - (that mean) exactly, so it differs from score - baseline by
  /// roughly this much.
  double efficiency_std_error = 0.0;
};

/// Permutation-sampling Shapley values of f at x. Each sample draws a random
/// feature order and a random background row, then walks the order
/// switching features from the background row to x one at a time; the score
/// change is credited to the switched feature.
ShapleyEstimate shapley_scores(const ScoreFunction& f, std::span<const double> x,
                               const FeatureMatrix& background, int n_permutations,
                               std::uint64_t seed);

/// Same, with the forest's anomaly score. x must follow model.feature_names().
ShapleyEstimate shapley_scores(const ForestModel& model, std::span<const double> x,
                               const FeatureMatrix& background, int n_permutations,
                               std::uint64_t seed);

/// Ranks each run's features (1 = largest value, ties share the mean rank)
/// and averages the ranks over runs. `runs[r][f]` is the statistic of
/// feature f in run r.
std::vector<double> average_ranks(const std::vector<std::vector<double>>& runs);

/// Ranks within one run, same convention.
std::vector<double> rank_descending(std::span<const double> values);

/// Nemenyi critical value q_alpha for k compared items (studentized range at
/// infinite df divided by sqrt 2). Supports k in [2, 60], alpha in {0.05, 0.10}.
double nemenyi_q(int n_features, double alpha);

/// q_alpha(k) * sqrt(k (k + 1) / (6 n)).
double critical_difference(int n_runs, int n_features, double alpha);

/// Maximal groups of features (indices, best rank first) whose average ranks
/// all lie within `cd` of each other. Singletons are omitted.
std::vector<std::vector<std::size_t>> cd_cliques(std::span<const double> average_ranks, double cd);

struct AttributionResult {
  std::vector<std::string> features;
  std::vector<double> mean_abs_shap;     // averaged over runs
  std::vector<double> mean_signed_shap;  // averaged over runs
  std::vector<std::vector<double>> per_run_ranks;
  std::vector<double> average_ranks;
  double critical_difference = 0.0;
  double alpha = 0.05;
  bool ranked_by_signed = false;
  std::vector<std::vector<std::string>> cliques;

  std::string to_json() const;
};

/// Aggregates per-run statistics (run x feature) into ranks, CD and cliques.
/// `per_run_abs` is used for ranking unless `rank_by_signed` is set.
AttributionResult summarize_attribution(std::vector<std::string> features,
                                        const std::vector<std::vector<double>>& per_run_abs,
                                        const std::vector<std::vector<double>>& per_run_signed,
                                        double alpha, bool rank_by_signed = false);

}  // namespace dielwave
