#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dielwave/core_model.hpp"
#include "dielwave/feature_matrix.hpp"
#include "dielwave/stats.hpp"
#include "dielwave/wavelet.hpp"

namespace dielwave {

/// What a window is reduced to before measuring its distance to the reference.
enum class WaveletOutput {
  Coefficients,    // level-l approximation coefficients
  Reconstruction,  // original-length signal rebuilt from those coefficients
};

struct WaveletFeatureOptions {
  WaveletOutput output = WaveletOutput::Coefficients;
  Padding padding = Padding::Symmetric;
  friend bool operator==(const WaveletFeatureOptions&, const WaveletFeatureOptions&) = default;
};

std::vector<double> wavelet_representation(std::span<const double> values, const WaveletSpec& spec,
                                           const WaveletFeatureOptions& options = {});

/// Mean normal period and, for each wavelet and each possible window phase,
/// the transform of the correspondingly rotated profile.
struct ReferencePeriod {
  PeriodConfig config;
  WaveletFeatureOptions options;
  std::vector<double> mean_profile;  // index k = hour-of-period k
  std::map<WaveletSpec, std::vector<std::vector<double>>> per_spec_transforms;  // [spec][phase]
};

/// Profile rotated so that element 0 is hour-of-period `phase`.
std::vector<double> rotate_profile(std::span<const double> profile, int phase);

/// Averages the phase-0 windows among `train` (indices into `windows`).
/// Throws ConfigError when no training window starts at phase 0 and
/// ArgumentError when window_size != period_length.
ReferencePeriod build_reference(std::span<const Window> windows,
                                std::span<const std::size_t> train, const PeriodConfig& config,
                                std::span<const WaveletSpec> specs,
                                const WaveletFeatureOptions& options = {});

/// Euclidean distance between a window's transform and the phase-aligned
/// reference transform.
double wavelet_feature(const Window& window, const ReferencePeriod& ref, const WaveletSpec& spec);

/// Distance between an already transformed window and the reference.
double wavelet_distance(std::span<const double> window_transform, const ReferencePeriod& ref,
                        const WaveletSpec& spec, int phase);

inline constexpr std::size_t kStatisticalFeatureCount = 27;
const std::array<std::string_view, kStatisticalFeatureCount>& statistical_feature_names();

enum class AutocorrEstimator {
  Pearson,   // correlation of x[0..n-d) with x[d..n)
  Circular,  // lag-d products with wrap-around, normalised by the variance
};

struct StatisticalOptions {
  AutocorrEstimator autocorr = AutocorrEstimator::Pearson;
  friend bool operator==(const StatisticalOptions&, const StatisticalOptions&) = default;
};

/// The 27 descriptive statistics for a 24-hour window, ordered as
/// statistical_feature_names(). Throws ArgumentError unless size == 24.
std::array<double, kStatisticalFeatureCount> statistical_feature_values(
    std::span<const double> window, const StatisticalOptions& options = {});

FeatureVector statistical_features(const Window& window, const StatisticalOptions& options = {});

/// Per-window transforms of every spec, computed once per dataset so that
/// wavelet features for many splits only cost a distance each.
class WaveletTransformCache {
 public:
  WaveletTransformCache(std::span<const Window> windows, std::vector<WaveletSpec> specs,
                        const WaveletFeatureOptions& options = {}, int jobs = 1);

  const std::vector<WaveletSpec>& specs() const { return specs_; }
  const WaveletFeatureOptions& options() const { return options_; }
  std::span<const double> transform(std::size_t spec_index, std::size_t window) const;

 private:
  std::vector<WaveletSpec> specs_;
  WaveletFeatureOptions options_;
  std::vector<std::vector<std::vector<double>>> transforms_;  // [spec][window]
};

/// Wavelet-feature matrix (one column per spec, named spec.name()) for the
/// given windows.
FeatureMatrix wavelet_feature_matrix(std::span<const Window> windows,
                                     std::span<const std::size_t> rows,
                                     const WaveletTransformCache& cache,
                                     const ReferencePeriod& ref);

/// Statistical-feature matrix for every window, in window order.
FeatureMatrix statistical_feature_matrix(std::span<const Window> windows,
                                         const StatisticalOptions& options = {}, int jobs = 1);

struct PruneRemoval {
  std::string feature;
  std::string partner;    // the feature it was too correlated with
  double correlation = 0.0;
  double mean_abs_correlation = 0.0;
};

struct PruneResult {
  std::vector<std::string> retained;
  std::vector<PruneRemoval> removed;
  std::vector<std::string> constant;  // zero-variance columns, kept
};

/// Removes correlated features: while some retained pair has |rho| > threshold,
/// take the strongest such pair and drop the member with the larger mean
/// |rho| to the other retained features. Ties resolve by name order (the
/// later name goes).
PruneResult prune_correlated(const FeatureMatrix& matrix, double threshold = 0.9);

}  // namespace dielwave
