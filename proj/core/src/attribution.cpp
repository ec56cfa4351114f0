#include "dielwave/attribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "dielwave/errors.hpp"

namespace dielwave {

namespace {

// Studentized range quantiles at infinite degrees of freedom divided by
// sqrt(2), for k = 2..60 compared items (scipy.stats.studentized_range.ppf).
constexpr std::array<double, 59> kNemenyiQ05{
    1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878, 3.101730, 3.163684,
    3.218654, 3.268004, 3.312739, 3.353618, 3.391230, 3.426041, 3.458425, 3.488685, 3.517073,
    3.543799, 3.569040, 3.592946, 3.615646, 3.637252, 3.657861, 3.677556, 3.696413, 3.714498,
    3.731869, 3.748578, 3.764672, 3.780193, 3.795179, 3.809664, 3.823680, 3.837254, 3.850413,
    3.863181, 3.875579, 3.887627, 3.899344, 3.910747, 3.921852, 3.932673, 3.943224, 3.953518,
    3.963566, 3.973379, 3.982969, 3.992343, 4.001512, 4.010485, 4.019268, 4.027869, 4.036297,
    4.044556, 4.052654, 4.060597, 4.068390, 4.076038};

constexpr std::array<double, 59> kNemenyiQ10{
    1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884, 2.854606, 2.919889,
    2.977768, 3.029694, 3.076733, 3.119693, 3.159199, 3.195743, 3.229723, 3.261461, 3.291224,
    3.319233, 3.345676, 3.370712, 3.394477, 3.417089, 3.438651, 3.459253, 3.478971, 3.497878,
    3.516033, 3.533492, 3.550305, 3.566516, 3.582165, 3.597288, 3.611917, 3.626084, 3.639814,
    3.653134, 3.666066, 3.678631, 3.690848, 3.702736, 3.714312, 3.725590, 3.736584, 3.747310,
    3.757778, 3.768000, 3.777987, 3.787750, 3.797297, 3.806638, 3.815781, 3.824735, 3.833505,
    3.842101, 3.850527, 3.858790, 3.866897, 3.874853};

}  // namespace

ShapleyEstimate shapley_scores(const ScoreFunction& f, std::span<const double> x,
                               const FeatureMatrix& background, int n_permutations,
                               std::uint64_t seed) {
  const std::size_t nf = x.size();
  if (background.rows() == 0) throw ArgumentError("shapley_scores: empty background");
  if (background.cols() != nf) {
    throw ArgumentError("shapley_scores: background has " + std::to_string(background.cols()) +
                        " features, x has " + std::to_string(nf));
  }
  if (n_permutations < 1) throw ArgumentError("shapley_scores: n_permutations must be >= 1");

  ShapleyEstimate out;
  out.score = f(x);
  double base_sum = 0.0;
  for (std::size_t r = 0; r < background.rows(); ++r) base_sum += f(background.row(r));
  out.baseline = base_sum / static_cast<double>(background.rows());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_row(0, background.rows() - 1);
  std::vector<std::size_t> order(nf);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> sum(nf, 0.0);
  std::vector<double> sum_sq(nf, 0.0);
  std::vector<double> current(nf);
  double start_sum = 0.0;
  double start_sq = 0.0;

  for (int p = 0; p < n_permutations; ++p) {
    std::shuffle(order.begin(), order.end(), rng);
    const auto z = background.row(pick_row(rng));
    std::copy(z.begin(), z.end(), current.begin());
    double prev = f(current);
    start_sum += prev;
    start_sq += prev * prev;
    for (std::size_t feat : order) {
      current[feat] = x[feat];
      const double val = f(current);
      const double delta = val - prev;
      sum[feat] += delta;
      sum_sq[feat] += delta * delta;
      prev = val;
    }
  }

  const auto n = static_cast<double>(n_permutations);
  auto std_error = [n](double s, double sq) {
    if (n < 2) return 0.0;
    const double m = s / n;
    const double var = std::max(0.0, (sq - n * m * m) / (n - 1.0));
    return std::sqrt(var / n);
  };
  out.values.resize(nf);
  out.std_errors.resize(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    out.values[i] = sum[i] / n;
    out.std_errors[i] = std_error(sum[i], sum_sq[i]);
  }
  out.efficiency_std_error = std_error(start_sum, start_sq);
  return out;
}

ShapleyEstimate shapley_scores(const ForestModel& model, std::span<const double> x,
                               const FeatureMatrix& background, int n_permutations,
                               std::uint64_t seed) {
  if (x.size() != model.feature_names().size()) {
    throw ArgumentError("shapley_scores: x does not match the model's features");
  }
  if (background.names() != model.feature_names()) {
    throw ArgumentError("shapley_scores: background columns differ from the model's features");
  }
  return shapley_scores([&model](std::span<const double> v) { return model.anomaly_score(v); }, x,
                        background, n_permutations, seed);
}

std::vector<double> rank_descending(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(n, 0.0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share ranks i+1..j.
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
    i = j;
  }
  return ranks;
}

std::vector<double> average_ranks(const std::vector<std::vector<double>>& runs) {
  if (runs.empty()) throw ArgumentError("average_ranks needs at least one run");
  const std::size_t nf = runs.front().size();
  std::vector<double> total(nf, 0.0);
  for (const auto& run : runs) {
    if (run.size() != nf) throw ArgumentError("average_ranks: runs have different widths");
    const auto r = rank_descending(run);
    for (std::size_t f = 0; f < nf; ++f) total[f] += r[f];
  }
  for (double& t : total) t /= static_cast<double>(runs.size());
  return total;
}

double nemenyi_q(int n_features, double alpha) {
  if (n_features < 2 || n_features > 60) {
    throw ArgumentError("Nemenyi table covers 2..60 compared features, got " +
                        std::to_string(n_features));
  }
  const auto idx = static_cast<std::size_t>(n_features - 2);
  if (std::abs(alpha - 0.05) < 1e-12) return kNemenyiQ05[idx];
  if (std::abs(alpha - 0.10) < 1e-12) return kNemenyiQ10[idx];
  throw ArgumentError("unsupported alpha " + std::to_string(alpha) + " (use 0.05 or 0.10)");
}

double critical_difference(int n_runs, int n_features, double alpha) {
  if (n_runs < 2) throw ArgumentError("critical difference needs at least two runs");
  const double q = nemenyi_q(n_features, alpha);
  const double k = n_features;
  return q * std::sqrt(k * (k + 1.0) / (6.0 * static_cast<double>(n_runs)));
}

std::vector<std::vector<std::size_t>> cd_cliques(std::span<const double> ranks, double cd) {
  std::vector<std::size_t> order(ranks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
  std::vector<std::vector<std::size_t>> cliques;
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t j = i;
    while (j + 1 < order.size() && ranks[order[j + 1]] - ranks[order[i]] < cd) ++j;
    if (j > i && j + 1 > last_end) {
      cliques.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                           order.begin() + static_cast<std::ptrdiff_t>(j + 1));
      last_end = j + 1;
    }
  }
  return cliques;
}

AttributionResult summarize_attribution(std::vector<std::string> features,
                                        const std::vector<std::vector<double>>& per_run_abs,
                                        const std::vector<std::vector<double>>& per_run_signed,
                                        double alpha, bool rank_by_signed) {
  if (per_run_abs.empty()) throw ArgumentError("summarize_attribution: no runs");
  if (per_run_abs.size() != per_run_signed.size()) {
    throw ArgumentError("summarize_attribution: abs/signed run counts differ");
  }
  AttributionResult res;
  res.features = std::move(features);
  res.alpha = alpha;
  res.ranked_by_signed = rank_by_signed;
  const std::size_t nf = res.features.size();
  res.mean_abs_shap.assign(nf, 0.0);
  res.mean_signed_shap.assign(nf, 0.0);
  const auto& ranking = rank_by_signed ? per_run_signed : per_run_abs;
  for (std::size_t r = 0; r < per_run_abs.size(); ++r) {
    if (per_run_abs[r].size() != nf || per_run_signed[r].size() != nf) {
      throw ArgumentError("summarize_attribution: run width differs from the feature count");
    }
    for (std::size_t f = 0; f < nf; ++f) {
      res.mean_abs_shap[f] += per_run_abs[r][f] / static_cast<double>(per_run_abs.size());
      res.mean_signed_shap[f] += per_run_signed[r][f] / static_cast<double>(per_run_abs.size());
    }
    res.per_run_ranks.push_back(rank_descending(ranking[r]));
  }
  res.average_ranks = average_ranks(ranking);
  if (ranking.size() >= 2 && nf >= 2) {
    res.critical_difference =
        critical_difference(static_cast<int>(ranking.size()), static_cast<int>(nf), alpha);
    for (const auto& clique : cd_cliques(res.average_ranks, res.critical_difference)) {
      std::vector<std::string> names;
      for (std::size_t i : clique) names.push_back(res.features[i]);
      res.cliques.push_back(std::move(names));
    }
  }
  return res;
}

std::string AttributionResult::to_json() const {
  nlohmann::json doc = {
      {"features", features},
      {"average_ranks", average_ranks},
      {"cd", critical_difference},
      {"alpha", alpha},
      {"cliques", cliques},
      {"n_runs", per_run_ranks.size()},
      {"ranked_by", ranked_by_signed ? "mean_signed_shap" : "mean_abs_shap"},
      {"mean_abs_shap", mean_abs_shap},
      {"mean_signed_shap", mean_signed_shap},
  };
  return doc.dump(2);
}

}  // namespace dielwave
