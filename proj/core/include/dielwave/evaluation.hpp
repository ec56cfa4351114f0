#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dielwave/core_model.hpp"

namespace dielwave {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Abnormal is the positive class; fuzzy-labelled windows are skipped.
ConfusionCounts confusion(std::span<const WindowLabel> truth, std::span<const Verdict> verdicts);

/// A metric is absent when its denominator is zero.
struct Metrics {
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> accuracy;
  std::optional<double> f1;
};

Metrics metrics(const ConfusionCounts& counts);

struct ExperimentProtocol {
  int n_splits = 70;
  int max_iterations = 20;
  double stabilization_epsilon = 0.001;
  int stabilization_window = 5;

  void validate() const;
  friend bool operator==(const ExperimentProtocol&, const ExperimentProtocol&) = default;
};

/// True once at least `window` accuracies exist and the running mean of the
/// accuracies moved by at most `epsilon` over the last `window` iterations
/// (max - min of the last `window` running means).
bool accuracy_stabilized(std::span<const double> accuracies, double epsilon, int window);

/// Verdict of one materialised window, identified by its start offset.
struct WindowVerdict {
  std::int64_t start_index = 0;
  Verdict verdict = Verdict::Normal;
};

struct PredictedStateSeries {
  HourStamp start{};
  double theta = 0.0;
  int daily_hour_quorum = 12;
  /// (normal - abnormal) / covering windows; empty where no window covers the hour.
  std::vector<std::optional<double>> values;
  std::vector<std::optional<Verdict>> hour_verdicts;
  /// Calendar days touched by the series, in order.
  std::vector<Day> days;
  /// Empty for days without any covered hour.
  std::vector<std::optional<Verdict>> day_verdicts;
  std::vector<int> abnormal_hours_per_day;

  std::optional<Verdict> day_verdict(Day d) const;
};

/// Per-hour predicted state over a series of `series_length` hours starting at
/// `start`. An hour is abnormal iff its value < theta (strict); a day is
/// abnormal iff at least `quorum` of its covered hours are abnormal.
PredictedStateSeries predicted_states(std::span<const WindowVerdict> windows,
                                      std::size_t series_length, int window_size, HourStamp start,
                                      double theta = 0.0, int quorum = 12);

/// How equidistant annotations before and after a detection are resolved.
enum class TieRule {
  Earlier,  // report the negative offset (detection ahead of the annotation)
  Later,
};

/// Signed offset (detected - annotated, in days) to the nearest annotated day.
std::optional<int> nearest_offset(Day day, std::span<const Day> annotated,
                                  TieRule tie = TieRule::Earlier);

struct DetectionOffsets {
  std::vector<int> offsets;   // one per detection with an annotated day available
  std::vector<Day> unmatched; // detections in series without any annotated day
};

DetectionOffsets distance_of_detection(std::span<const Day> detected_days,
                                       std::span<const Day> annotated_abnormal_days,
                                       TieRule tie = TieRule::Earlier);

/// Detections at offset d divided by the number of days available at offset
/// d. Offsets without availability are omitted.
std::map<int, double> normalized_histogram(std::span<const int> offsets,
                                           const std::map<int, std::size_t>& availability);

/// Counts, for every candidate day, its offset to the nearest annotated day.
void accumulate_availability(std::span<const Day> candidate_days,
                             std::span<const Day> annotated_abnormal_days, TieRule tie,
                             std::map<int, std::size_t>& availability);

/// Share of offsets inside [lo, hi]; empty for no offsets.
std::optional<double> fraction_in_range(std::span<const int> offsets, int lo, int hi);

}  // namespace dielwave
