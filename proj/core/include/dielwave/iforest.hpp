#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dielwave/core_model.hpp"
#include "dielwave/feature_matrix.hpp"

namespace dielwave {

struct ForestParams {
  int n_trees = 100;
  double subsample_fraction = 1.0;  // share of the training rows drawn per tree
  std::uint64_t seed = 0;
  double threshold_quantile = 0.95;  // training-score quantile used as cut-off
  int jobs = 1;

  void validate() const;
  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct IsolationNode {
  int feature = -1;      // -1 for leaves
  double split = 0.0;    // x[feature] < split goes left
  int left = -1;
  int right = -1;
  int sample_count = 0;  // training rows that reached this node
  int depth = 0;

  bool is_leaf() const { return feature < 0; }
};

/// One isolation tree stored as a flat node array with the root at 0.
class IsolationTree {
 public:
  IsolationTree() = default;
  explicit IsolationTree(std::vector<IsolationNode> nodes);

  const std::vector<IsolationNode>& nodes() const { return nodes_; }
  /// Index of the leaf reached by x.
  std::size_t leaf_for(std::span<const double> x) const;
  /// Edges traversed plus the average-path adjustment of the leaf size.
  double path_length(std::span<const double> x) const;
  int depth() const;

 private:
  std::vector<IsolationNode> nodes_;
};

/// Average path length of an unsuccessful BST search among m points:
/// c(m) = 2 H(m-1) - 2 (m-1) / m, c(2) = 1, c(m <= 1) = 0, H(k) = ln k + gamma.
double average_path_length(double m);

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<std::string> feature_names, std::vector<IsolationTree> trees,
              ForestParams params, std::size_t trained_on, std::size_t subsample_size);

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<IsolationTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  std::size_t trained_on() const { return trained_on_; }
  std::size_t subsample_size() const { return subsample_size_; }
  double score_threshold() const { return score_threshold_; }
  void set_score_threshold(double t) { score_threshold_ = t; }

  /// Mean path length over trees; x is aligned with feature_names().
  double path_length(std::span<const double> x) const;
  double path_length(const FeatureVector& x) const;
  /// 2^(-E[h(x)] / c(psi)), psi the per-tree sample size.
  double anomaly_score(std::span<const double> x) const;
  double anomaly_score(const FeatureVector& x) const;
  std::vector<double> anomaly_scores(const FeatureMatrix& rows, int jobs = 1) const;

  /// Features used by at least one split.
  std::vector<bool> used_features() const;

  std::string to_json() const;
  static ForestModel from_json(const std::string& text);

 private:
  std::vector<double> align(const FeatureVector& x) const;
  void check_width(std::size_t n) const;

  std::vector<std::string> feature_names_;
  std::vector<IsolationTree> trees_;
  ForestParams params_;
  std::size_t trained_on_ = 0;
  std::size_t subsample_size_ = 0;
  double score_threshold_ = 1.0;
};

/// Trains a forest on the rows of `train` and sets the score threshold to the
/// configured quantile of the training scores. Tree t draws its subsample and
/// splits from its own RNG stream derived from (seed, t), so the model does
/// not depend on the number of jobs.
ForestModel fit(const FeatureMatrix& train, const ForestParams& params);

/// Abnormal iff score > threshold.
std::vector<Verdict> decide(double threshold, std::span<const double> scores);
std::vector<Verdict> decide(const ForestModel& model, std::span<const double> scores);

}  // namespace dielwave
