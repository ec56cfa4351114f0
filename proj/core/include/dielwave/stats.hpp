#pragma once

#include <cstdint>
#include <span>

namespace dielwave {

/// Linear interpolation between order statistics (numpy's default method).
double quantile(std::span<const double> values, double p);

/// Pearson correlation; 0 when either side has (numerically) zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> values);
/// Population (ddof = 0) standard deviation.
double stddev(std::span<const double> values);
/// Sample (ddof = 1) standard deviation; 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

/// SplitMix64 finaliser; used to derive independent RNG seeds from a base
/// seed and a stream index.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace dielwave
