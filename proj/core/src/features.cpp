#include "dielwave/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "dielwave/errors.hpp"
#include "dielwave/parallel.hpp"

namespace dielwave {

namespace {

constexpr std::array<std::string_view, kStatisticalFeatureCount> kStatNames{
    "Minimum",    "Maximum",    "Mean",       "RMS",        "STD",        "MeanSTD6h",
    "STDMean6h",  "RMSSD",      "Mode",       "Q10",        "Q25",        "Median",
    "Q75",        "Q90",        "Skewness",   "Kurtosis",   "Autocorr1",  "Autocorr2",
    "Autocorr3",  "Autocorr4",  "Autocorr5",  "Autocorr6",  "Autocorr7",  "Autocorr8",
    "Autocorr9",  "Autocorr10", "Autocorr11"};

constexpr std::size_t kHoursPerWindow = 24;
constexpr std::size_t kBlockHours = 6;
constexpr int kMaxLag = 11;

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Population variance around `mean`.
double variance_of(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size());
}

// Treat variances this small relative to the signal scale as zero so that
// constant windows stay constant despite rounding in the mean.
bool negligible_variance(double var, double mean) {
  const double scale = std::max(1.0, mean * mean);
  return var <= 1e-24 * scale;
}

double mode_of(std::span<const double> v) {
  std::vector<double> rounded(v.size());
  std::transform(v.begin(), v.end(), rounded.begin(), [](double x) { return std::round(x); });
  std::sort(rounded.begin(), rounded.end());
  double best = rounded.front();
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < rounded.size();) {
    std::size_t j = i;
    while (j < rounded.size() && rounded[j] == rounded[i]) ++j;
    if (j - i > best_count) {  // strict: earliest (smallest) value wins ties
      best_count = j - i;
      best = rounded[i];
    }
    i = j;
  }
  return best + 0.0;  // normalise -0.0
}

double circular_autocorr(std::span<const double> v, int lag, double mean, double var) {
  if (negligible_variance(var, mean)) return 0.0;
  const std::size_t n = v.size();
  double s = 0.0;
  for (std::size_t h = 0; h < n; ++h) {
    s += (v[h] - mean) * (v[(h + static_cast<std::size_t>(lag)) % n] - mean);
  }
  return s / static_cast<double>(n) / var;
}

}  // namespace

std::vector<double> wavelet_representation(std::span<const double> values, const WaveletSpec& spec,
                                           const WaveletFeatureOptions& options) {
  if (options.output == WaveletOutput::Reconstruction) {
    return approximation_signal(values, spec, options.padding);
  }
  return dwt_approx(values, spec, options.padding);
}

std::vector<double> rotate_profile(std::span<const double> profile, int phase) {
  const std::size_t n = profile.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = profile[(k + static_cast<std::size_t>(phase)) % n];
  return out;
}

ReferencePeriod build_reference(std::span<const Window> windows,
                                std::span<const std::size_t> train, const PeriodConfig& config,
                                std::span<const WaveletSpec> specs,
                                const WaveletFeatureOptions& options) {
  config.validate();
  if (config.window_size != config.period_length) {
    throw ArgumentError("wavelet features need window_size == period_length (got " +
                        std::to_string(config.window_size) + " and " +
                        std::to_string(config.period_length) + ")");
  }
  const auto period = static_cast<std::size_t>(config.period_length);

  ReferencePeriod ref;
  ref.config = config;
  ref.options = options;
  ref.mean_profile.assign(period, 0.0);
  std::size_t used = 0;
  for (std::size_t idx : train) {
    const Window& w = windows[idx];
    if (w.start_hour_of_period != 0) continue;
    if (w.values.size() != period) throw ArgumentError("window length differs from the period");
    for (std::size_t k = 0; k < period; ++k) ref.mean_profile[k] += w.values[k];
    ++used;
  }
  if (used == 0) {
    throw ConfigError("no training window starts at hour-of-period 0; cannot build the "
                      "reference period");
  }
  for (double& m : ref.mean_profile) m /= static_cast<double>(used);

  for (const WaveletSpec& spec : specs) {
    auto& per_phase = ref.per_spec_transforms[spec];
    per_phase.reserve(period);
    for (std::size_t s = 0; s < period; ++s) {
      per_phase.push_back(wavelet_representation(
          rotate_profile(ref.mean_profile, static_cast<int>(s)), spec, options));
    }
  }
  return ref;
}

double wavelet_distance(std::span<const double> window_transform, const ReferencePeriod& ref,
                        const WaveletSpec& spec, int phase) {
  const auto it = ref.per_spec_transforms.find(spec);
  if (it == ref.per_spec_transforms.end()) {
    throw ArgumentError("reference has no transform for " + spec.name());
  }
  if (phase < 0 || static_cast<std::size_t>(phase) >= it->second.size()) {
    throw std::logic_error("reference has no transform for phase " + std::to_string(phase));
  }
  const auto& target = it->second[static_cast<std::size_t>(phase)];
  if (target.size() != window_transform.size()) {
    throw ArgumentError("transform length mismatch for " + spec.name());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = window_transform[i] - target[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double wavelet_feature(const Window& window, const ReferencePeriod& ref, const WaveletSpec& spec) {
  if (window.values.size() != static_cast<std::size_t>(ref.config.period_length)) {
    throw ArgumentError("wavelet_feature: window length must equal the period length");
  }
  const auto t = wavelet_representation(window.values, spec, ref.options);
  return wavelet_distance(t, ref, spec, window.start_hour_of_period);
}

const std::array<std::string_view, kStatisticalFeatureCount>& statistical_feature_names() {
  return kStatNames;
}

std::array<double, kStatisticalFeatureCount> statistical_feature_values(
    std::span<const double> v, const StatisticalOptions& options) {
  if (v.size() != kHoursPerWindow) {
    throw ArgumentError("statistical features are defined on 24-hour windows, got " +
                        std::to_string(v.size()) + " values");
  }
  std::array<double, kStatisticalFeatureCount> out{};
  const auto n = static_cast<double>(v.size());
  const double mean = mean_of(v);
  const double var = variance_of(v, mean);
  const bool flat = negligible_variance(var, mean);

  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  out[0] = *mn;
  out[1] = *mx;
  out[2] = mean;
  double sq = 0.0;
  for (double x : v) sq += x * x;
  out[3] = std::sqrt(sq / n);
  out[4] = flat ? 0.0 : std::sqrt(var);

  std::array<double, kHoursPerWindow / kBlockHours> block_means{};
  double block_std_sum = 0.0;
  for (std::size_t b = 0; b < block_means.size(); ++b) {
    const auto block = v.subspan(b * kBlockHours, kBlockHours);
    block_means[b] = mean_of(block);
    const double bv = variance_of(block, block_means[b]);
    block_std_sum += negligible_variance(bv, block_means[b]) ? 0.0 : std::sqrt(bv);
  }
  out[5] = block_std_sum / static_cast<double>(block_means.size());
  const double bm_mean = mean_of(block_means);
  const double bm_var = variance_of(block_means, bm_mean);
  out[6] = negligible_variance(bm_var, bm_mean) ? 0.0 : std::sqrt(bm_var);

  double ssd = 0.0;
  for (std::size_t h = 0; h + 1 < v.size(); ++h) ssd += (v[h + 1] - v[h]) * (v[h + 1] - v[h]);
  out[7] = std::sqrt(ssd / (n - 1.0));
  out[8] = mode_of(v);
  out[9] = quantile(v, 0.10);
  out[10] = quantile(v, 0.25);
  out[11] = quantile(v, 0.50);
  out[12] = quantile(v, 0.75);
  out[13] = quantile(v, 0.90);

  if (flat) {
    out[14] = 0.0;
    out[15] = 0.0;
  } else {
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : v) {
      const double d = x - mean;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    m3 /= n;
    m4 /= n;
    out[14] = m3 / std::pow(var, 1.5);
    out[15] = m4 / (var * var);
  }

  for (int d = 1; d <= kMaxLag; ++d) {
    const auto lag = static_cast<std::size_t>(d);
    double r = 0.0;
    if (options.autocorr == AutocorrEstimator::Pearson) {
      r = pearson(v.first(v.size() - lag), v.subspan(lag));
    } else {
      r = circular_autocorr(v, d, mean, var);
    }
    out[15 + lag] = r;
  }
  return out;
}

FeatureVector statistical_features(const Window& window, const StatisticalOptions& options) {
  const auto values = statistical_feature_values(window.values, options);
  FeatureVector out;
  for (std::size_t i = 0; i < kStatisticalFeatureCount; ++i) {
    out.emplace(std::string(kStatNames[i]), values[i]);
  }
  return out;
}

WaveletTransformCache::WaveletTransformCache(std::span<const Window> windows,
                                             std::vector<WaveletSpec> specs,
                                             const WaveletFeatureOptions& options, int jobs)
    : specs_(std::move(specs)), options_(options), transforms_(specs_.size()) {
  for (auto& per_window : transforms_) per_window.resize(windows.size());
  parallel_for(windows.size(), jobs, [&](std::size_t w) {
    for (std::size_t s = 0; s < specs_.size(); ++s) {
      transforms_[s][w] = wavelet_representation(windows[w].values, specs_[s], options_);
    }
  });
}

std::span<const double> WaveletTransformCache::transform(std::size_t spec_index,
                                                         std::size_t window) const {
  return transforms_.at(spec_index).at(window);
}

FeatureMatrix wavelet_feature_matrix(std::span<const Window> windows,
                                     std::span<const std::size_t> rows,
                                     const WaveletTransformCache& cache,
                                     const ReferencePeriod& ref) {
  if (cache.options().output != ref.options.output ||
      cache.options().padding != ref.options.padding) {
    throw ArgumentError("transform cache and reference use different wavelet options");
  }
  std::vector<std::string> names;
  for (const auto& s : cache.specs()) names.push_back(s.name());
  FeatureMatrix out(std::move(names), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Window& w = windows[rows[r]];
    for (std::size_t s = 0; s < cache.specs().size(); ++s) {
      out.at(r, s) =
          wavelet_distance(cache.transform(s, rows[r]), ref, cache.specs()[s], w.start_hour_of_period);
    }
  }
  return out;
}

FeatureMatrix statistical_feature_matrix(std::span<const Window> windows,
                                         const StatisticalOptions& options, int jobs) {
  std::vector<std::string> names(kStatNames.begin(), kStatNames.end());
  FeatureMatrix out(std::move(names), windows.size());
  parallel_for(windows.size(), jobs, [&](std::size_t w) {
    const auto values = statistical_feature_values(windows[w].values, options);
    std::copy(values.begin(), values.end(), out.row(w).begin());
  });
  return out;
}

PruneResult prune_correlated(const FeatureMatrix& matrix, double threshold) {
  if (matrix.rows() < 2) throw ArgumentError("prune_correlated needs at least two samples");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ArgumentError("correlation threshold must lie in (0, 1]");
  }
  const std::size_t f = matrix.cols();
  const auto& names = matrix.names();

  std::vector<std::vector<double>> cols(f);
  std::vector<bool> constant(f, false);
  PruneResult result;
  for (std::size_t c = 0; c < f; ++c) {
    cols[c] = matrix.column(c);
    const double m = mean_of(cols[c]);
    constant[c] = negligible_variance(variance_of(cols[c], m), m);
    if (constant[c]) result.constant.push_back(names[c]);
  }
  std::vector<std::vector<double>> rho(f, std::vector<double>(f, 0.0));
  for (std::size_t i = 0; i < f; ++i) {
    for (std::size_t j = i + 1; j < f; ++j) {
      const double r = constant[i] || constant[j] ? 0.0 : pearson(cols[i], cols[j]);
      rho[i][j] = rho[j][i] = r;
    }
  }

  std::vector<bool> alive(f, true);
  auto mean_abs = [&](std::size_t i) {
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < f; ++j) {
      if (j == i || !alive[j]) continue;
      s += std::abs(rho[i][j]);
      ++k;
    }
    return k == 0 ? 0.0 : s / static_cast<double>(k);
  };
  // Name-ordered pair: (smaller name, larger name).
  auto ordered = [&](std::size_t i, std::size_t j) {
    return names[i] < names[j] ? std::pair{i, j} : std::pair{j, i};
  };

  for (;;) {
    bool found = false;
    std::size_t bi = 0;
    std::size_t bj = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < f; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < f; ++j) {
        if (!alive[j]) continue;
        const double a = std::abs(rho[i][j]);
        if (a <= threshold) continue;
        const auto cand = ordered(i, j);
        if (!found || a > best ||
            (a == best && std::tie(names[cand.first], names[cand.second]) <
                              std::tie(names[bi], names[bj]))) {
          found = true;
          best = a;
          bi = cand.first;
          bj = cand.second;
        }
      }
    }
    if (!found) break;
    const double mi = mean_abs(bi);
    const double mj = mean_abs(bj);
    // bi has the smaller name, so it survives an exact tie.
    const std::size_t drop = mi > mj ? bi : bj;
    const std::size_t keep = drop == bi ? bj : bi;
    result.removed.push_back({names[drop], names[keep], rho[bi][bj], drop == bi ? mi : mj});
    alive[drop] = false;
  }
  for (std::size_t c = 0; c < f; ++c) {
    if (alive[c]) result.retained.push_back(names[c]);
  }
  return result;
}

}  // namespace dielwave
