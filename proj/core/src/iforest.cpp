#include "dielwave/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "dielwave/errors.hpp"
#include "dielwave/parallel.hpp"
#include "dielwave/stats.hpp"

namespace dielwave {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& data, int height_limit, std::mt19937_64& rng)
      : data_(data), height_limit_(height_limit), rng_(rng) {}

  std::vector<IsolationNode> build(std::vector<std::size_t> rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::span<std::size_t> rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    IsolationNode node;
    node.sample_count = static_cast<int>(rows.size());
    node.depth = depth;
    nodes_.push_back(node);
    if (depth >= height_limit_ || rows.size() <= 1) return id;

    // Only features that still vary inside the node can split it.
    candidates_.clear();
    bounds_.clear();
    for (std::size_t f = 0; f < data_.cols(); ++f) {
      double lo = data_.at(rows[0], f);
      double hi = lo;
      for (std::size_t r : rows) {
        const double v = data_.at(r, f);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (lo < hi) {
        candidates_.push_back(f);
        bounds_.emplace_back(lo, hi);
      }
    }
    if (candidates_.empty()) return id;

    std::uniform_int_distribution<std::size_t> pick(0, candidates_.size() - 1);
    const std::size_t c = pick(rng_);
    const std::size_t feature = candidates_[c];
    const auto [lo, hi] = bounds_[c];
    std::uniform_real_distribution<double> cut(lo, hi);
    double split = cut(rng_);
    while (!(split > lo && split < hi)) split = cut(rng_);

    auto mid = std::partition(rows.begin(), rows.end(),
                              [&](std::size_t r) { return data_.at(r, feature) < split; });
    const auto n_left = static_cast<std::size_t>(mid - rows.begin());

    const int left = grow(rows.first(n_left), depth + 1);
    const int right = grow(rows.subspan(n_left), depth + 1);
    auto& self = nodes_[static_cast<std::size_t>(id)];
    self.feature = static_cast<int>(feature);
    self.split = split;
    self.left = left;
    self.right = right;
    return id;
  }

  const FeatureMatrix& data_;
  int height_limit_;
  std::mt19937_64& rng_;
  std::vector<IsolationNode> nodes_;
  std::vector<std::size_t> candidates_;
  std::vector<std::pair<double, double>> bounds_;
};

}  // namespace

void ForestParams::validate() const {
  if (n_trees < 1) throw ArgumentError("n_trees must be >= 1");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    throw ArgumentError("subsample_fraction must lie in (0, 1]");
  }
  if (!(threshold_quantile >= 0.0 && threshold_quantile <= 1.0)) {
    throw ArgumentError("threshold_quantile must lie in [0, 1]");
  }
}

IsolationTree::IsolationTree(std::vector<IsolationNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ArgumentError("isolation tree without nodes");
  const auto n = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (!node.is_leaf() && (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n)) {
      throw ArgumentError("isolation tree node has an out-of-range child");
    }
  }
}

std::size_t IsolationTree::leaf_for(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] < node.split ? node.left
                                                                                       : node.right);
  }
  return i;
}

double IsolationTree::path_length(std::span<const double> x) const {
  const auto& leaf = nodes_[leaf_for(x)];
  return static_cast<double>(leaf.depth) + average_path_length(leaf.sample_count);
}

int IsolationTree::depth() const {
  int d = 0;
  for (const auto& node : nodes_) d = std::max(d, node.depth);
  return d;
}

double average_path_length(double m) {
  if (m <= 1.0) return 0.0;
  if (m <= 2.0) return 1.0;
  return 2.0 * (std::log(m - 1.0) + kEulerGamma) - 2.0 * (m - 1.0) / m;
}

ForestModel::ForestModel(std::vector<std::string> feature_names, std::vector<IsolationTree> trees,
                         ForestParams params, std::size_t trained_on, std::size_t subsample_size)
    : feature_names_(std::move(feature_names)),
      trees_(std::move(trees)),
      params_(params),
      trained_on_(trained_on),
      subsample_size_(subsample_size) {}

void ForestModel::check_width(std::size_t n) const {
  if (n != feature_names_.size()) {
    throw ArgumentError("feature vector has " + std::to_string(n) + " values, model expects " +
                        std::to_string(feature_names_.size()));
  }
}

std::vector<double> ForestModel::align(const FeatureVector& x) const {
  std::vector<double> out;
  out.reserve(feature_names_.size());
  for (const auto& name : feature_names_) {
    const auto it = x.find(name);
    if (it == x.end()) throw ArgumentError("feature vector lacks '" + name + "'");
    out.push_back(it->second);
  }
  return out;
}

double ForestModel::path_length(std::span<const double> x) const {
  check_width(x.size());
  double s = 0.0;
  for (const auto& t : trees_) s += t.path_length(x);
  return s / static_cast<double>(trees_.size());
}

double ForestModel::path_length(const FeatureVector& x) const { return path_length(align(x)); }

double ForestModel::anomaly_score(std::span<const double> x) const {
  const double c = average_path_length(static_cast<double>(subsample_size_));
  const double h = path_length(x);
  if (c <= 0.0) return 0.5;
  return std::exp2(-h / c);
}

double ForestModel::anomaly_score(const FeatureVector& x) const { return anomaly_score(align(x)); }

std::vector<double> ForestModel::anomaly_scores(const FeatureMatrix& rows, int jobs) const {
  check_width(rows.cols());
  std::vector<double> out(rows.rows());
  parallel_for(rows.rows(), jobs, [&](std::size_t r) { out[r] = anomaly_score(rows.row(r)); });
  return out;
}

std::vector<bool> ForestModel::used_features() const {
  std::vector<bool> used(feature_names_.size(), false);
  for (const auto& t : trees_) {
    for (const auto& node : t.nodes()) {
      if (!node.is_leaf()) used[static_cast<std::size_t>(node.feature)] = true;
    }
  }
  return used;
}

std::string ForestModel::to_json() const {
  using nlohmann::json;
  json trees = json::array();
  for (const auto& t : trees_) {
    json nodes = json::array();
    for (const auto& n : t.nodes()) {
      nodes.push_back({n.feature, n.split, n.left, n.right, n.sample_count, n.depth});
    }
    trees.push_back(std::move(nodes));
  }
  json doc = {
      {"format", "dielwave-isolation-forest"},
      {"version", 1},
      {"features", feature_names_},
      {"params",
       {{"n_trees", params_.n_trees},
        {"subsample_fraction", params_.subsample_fraction},
        {"seed", params_.seed},
        {"threshold_quantile", params_.threshold_quantile}}},
      {"trained_on", trained_on_},
      {"subsample_size", subsample_size_},
      {"score_threshold", score_threshold_},
      {"trees", std::move(trees)},
  };
  return doc.dump(1);
}

ForestModel ForestModel::from_json(const std::string& text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "dielwave-isolation-forest" || doc.at("version") != 1) {
      throw ArgumentError("not a dielwave isolation forest document");
    }
    ForestParams params;
    const auto& p = doc.at("params");
    params.n_trees = p.at("n_trees").get<int>();
    params.subsample_fraction = p.at("subsample_fraction").get<double>();
    params.seed = p.at("seed").get<std::uint64_t>();
    params.threshold_quantile = p.at("threshold_quantile").get<double>();

    auto names = doc.at("features").get<std::vector<std::string>>();
    std::vector<IsolationTree> trees;
    for (const auto& t : doc.at("trees")) {
      std::vector<IsolationNode> nodes;
      for (const auto& n : t) {
        IsolationNode node;
        node.feature = n.at(0).get<int>();
        node.split = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.sample_count = n.at(4).get<int>();
        node.depth = n.at(5).get<int>();
        if (node.feature >= static_cast<int>(names.size())) {
          throw ArgumentError("tree node refers to an unknown feature");
        }
        nodes.push_back(node);
      }
      trees.emplace_back(std::move(nodes));
    }
    ForestModel model(std::move(names), std::move(trees), params,
                      doc.at("trained_on").get<std::size_t>(),
                      doc.at("subsample_size").get<std::size_t>());
    model.set_score_threshold(doc.at("score_threshold").get<double>());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed forest JSON: ") + e.what());
  }
}

ForestModel fit(const FeatureMatrix& train, const ForestParams& params) {
  params.validate();
  const std::size_t n = train.rows();
  if (n < 2) throw ArgumentError("isolation forest needs at least two training samples");
  for (std::size_t r = 0; r < n; ++r) {
    for (double v : train.row(r)) {
      if (std::isnan(v)) throw ArgumentError("training matrix contains NaN");
    }
  }

  const auto psi = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(params.subsample_fraction * static_cast<double>(n))));
  const int height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(psi))));

  std::vector<IsolationTree> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(trees.size(), params.jobs, [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(params.seed, t));
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    if (psi < n) {
      for (std::size_t i = 0; i < psi; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(rows[i], rows[pick(rng)]);
      }
      rows.resize(psi);
    }
    TreeBuilder builder(train, height_limit, rng);
    trees[t] = IsolationTree(builder.build(std::move(rows)));
  });

  ForestModel model(train.names(), std::move(trees), params, n, psi);
  const auto scores = model.anomaly_scores(train, params.jobs);
  model.set_score_threshold(quantile(scores, params.threshold_quantile));
  return model;
}

std::vector<Verdict> decide(double threshold, std::span<const double> scores) {
  std::vector<Verdict> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s > threshold ? Verdict::Abnormal : Verdict::Normal);
  return out;
}

std::vector<Verdict> decide(const ForestModel& model, std::span<const double> scores) {
  return decide(model.score_threshold(), scores);
}

}  // namespace dielwave
