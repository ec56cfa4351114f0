#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dielwave/core_model.hpp"

namespace testing_support {

using namespace dielwave;

inline HourStamp hour0(int y = 2021, unsigned m = 1, unsigned d = 4) {
  return std::chrono::time_point_cast<std::chrono::hours>(
      std::chrono::sys_days(std::chrono::year(y) / std::chrono::month(m) / std::chrono::day(d)));
}

inline Day day0(int y = 2021, unsigned m = 1, unsigned d = 4) {
  return std::chrono::sys_days(std::chrono::year(y) / std::chrono::month(m) / std::chrono::day(d));
}

inline LabeledSeries make_series(std::string id, HourStamp start, const std::vector<double>& values,
                                 std::vector<HourLabel> labels = {}) {
  if (labels.empty()) labels.assign(values.size(), HourLabel::Normal);
  std::vector<std::optional<double>> v(values.begin(), values.end());
  return LabeledSeries(std::move(id), start, std::move(v), std::move(labels));
}

inline std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n, double scale = 10.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Pad-convolve-decimate written from the textbook description: mirror the
// signal by L-1 samples on each side, take the full convolution with the
// analysis lowpass, keep every second sample starting at the L-th.
inline std::vector<double> oracle_analysis(const std::vector<double>& x, const std::vector<double>& h) {
  const long n = static_cast<long>(x.size());
  const long L = static_cast<long>(h.size());
  std::vector<double> padded;
  for (long i = -(L - 1); i < n + (L - 1); ++i) {
    long j = i;
    while (j < 0 || j >= n) j = j < 0 ? -j - 1 : 2 * n - j - 1;
    padded.push_back(x[static_cast<std::size_t>(j)]);
  }
  std::vector<double> full(padded.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    for (std::size_t k = 0; k < h.size(); ++k) full[i + k] += padded[i] * h[k];
  }
  const long out_len = (n + L - 1) / 2;
  std::vector<double> out;
  for (long o = 0; o < out_len; ++o) out.push_back(full[static_cast<std::size_t>(L + 2 * o)]);
  return out;
}

}  // namespace testing_support
