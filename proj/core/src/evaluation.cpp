#include "dielwave/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "dielwave/errors.hpp"

namespace dielwave {

ConfusionCounts confusion(std::span<const WindowLabel> truth, std::span<const Verdict> verdicts) {
  if (truth.size() != verdicts.size()) {
    throw ArgumentError("confusion: " + std::to_string(truth.size()) + " labels but " +
                        std::to_string(verdicts.size()) + " verdicts");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool flagged = verdicts[i] == Verdict::Abnormal;
    switch (truth[i]) {
      case WindowLabel::Abnormal: (flagged ? c.tp : c.fn)++; break;
      case WindowLabel::Normal: (flagged ? c.fp : c.tn)++; break;
      case WindowLabel::Fuzzy: break;
    }
  }
  return c;
}

Metrics metrics(const ConfusionCounts& c) {
  auto ratio = [](double num, double den) -> std::optional<double> {
    if (den <= 0.0) return std::nullopt;
    return num / den;
  };
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto tn = static_cast<double>(c.tn);
  const auto fn = static_cast<double>(c.fn);
  Metrics m;
  m.recall = ratio(tp, fn + tp);
  m.precision = ratio(tp, fp + tp);
  m.accuracy = ratio(tp + tn, tp + fn + tn + fp);
  m.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);
  return m;
}

void ExperimentProtocol::validate() const {
  if (n_splits < 1) throw ArgumentError("n_splits must be >= 1");
  if (max_iterations < 1) throw ArgumentError("max_iterations must be >= 1");
  if (stabilization_window < 1) throw ArgumentError("stabilization_window must be >= 1");
  if (std::isnan(stabilization_epsilon) || stabilization_epsilon < 0.0) {
    throw ArgumentError("stabilization_epsilon must be >= 0");
  }
}

bool accuracy_stabilized(std::span<const double> accuracies, double epsilon, int window) {
  const auto w = static_cast<std::size_t>(window);
  if (window < 1 || accuracies.size() < w) return false;
  double sum = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  const std::size_t first = accuracies.size() - w;
  for (std::size_t i = 0; i < accuracies.size(); ++i) {
    sum += accuracies[i];
    const double running = sum / static_cast<double>(i + 1);
    if (i == first) {
      lo = hi = running;
    } else if (i > first) {
      lo = std::min(lo, running);
      hi = std::max(hi, running);
    }
  }
  return hi - lo <= epsilon;
}

std::optional<Verdict> PredictedStateSeries::day_verdict(Day d) const {
  const auto it = std::lower_bound(days.begin(), days.end(), d);
  if (it == days.end() || *it != d) return std::nullopt;
  return day_verdicts[static_cast<std::size_t>(it - days.begin())];
}

PredictedStateSeries predicted_states(std::span<const WindowVerdict> windows,
                                      std::size_t series_length, int window_size, HourStamp start,
                                      double theta, int quorum) {
  if (window_size < 1) throw ArgumentError("window_size must be >= 1");
  if (theta < -1.0 || theta > 1.0) throw ArgumentError("theta must lie in [-1, 1]");
  PredictedStateSeries out;
  out.start = start;
  out.theta = theta;
  out.daily_hour_quorum = quorum;

  std::vector<int> normal(series_length, 0);
  std::vector<int> abnormal(series_length, 0);
  const auto q = static_cast<std::size_t>(window_size);
  for (const auto& w : windows) {
    if (w.start_index < 0 || static_cast<std::size_t>(w.start_index) + q > series_length) {
      throw ArgumentError("window at offset " + std::to_string(w.start_index) +
                          " does not fit a series of " + std::to_string(series_length) + " hours");
    }
    auto& counter = w.verdict == Verdict::Abnormal ? abnormal : normal;
    const auto first = static_cast<std::size_t>(w.start_index);
    for (std::size_t h = first; h < first + q; ++h) ++counter[h];
  }

  out.values.resize(series_length);
  out.hour_verdicts.resize(series_length);
  std::vector<int> covered_per_day;
  for (std::size_t h = 0; h < series_length; ++h) {
    const Day d = day_of(start + std::chrono::hours(h));
    if (out.days.empty() || out.days.back() != d) {
      out.days.push_back(d);
      out.abnormal_hours_per_day.push_back(0);
      covered_per_day.push_back(0);
    }
    const int total = normal[h] + abnormal[h];
    if (total == 0) continue;
    const double value = static_cast<double>(normal[h] - abnormal[h]) / total;
    out.values[h] = value;
    const Verdict v = value < theta ? Verdict::Abnormal : Verdict::Normal;
    out.hour_verdicts[h] = v;
    ++covered_per_day.back();
    if (v == Verdict::Abnormal) ++out.abnormal_hours_per_day.back();
  }
  out.day_verdicts.reserve(out.days.size());
  for (std::size_t i = 0; i < out.days.size(); ++i) {
    if (covered_per_day[i] == 0) {
      out.day_verdicts.emplace_back(std::nullopt);
    } else {
      out.day_verdicts.emplace_back(out.abnormal_hours_per_day[i] >= quorum ? Verdict::Abnormal
                                                                            : Verdict::Normal);
    }
  }
  return out;
}

std::optional<int> nearest_offset(Day day, std::span<const Day> annotated, TieRule tie) {
  std::optional<int> best;
  for (const Day a : annotated) {
    const int off = static_cast<int>((day - a).count());
    if (!best || std::abs(off) < std::abs(*best) ||
        (std::abs(off) == std::abs(*best) &&
         (tie == TieRule::Earlier ? off < *best : off > *best))) {
      best = off;
    }
  }
  return best;
}

DetectionOffsets distance_of_detection(std::span<const Day> detected_days,
                                       std::span<const Day> annotated_abnormal_days, TieRule tie) {
  DetectionOffsets out;
  for (const Day d : detected_days) {
    if (const auto off = nearest_offset(d, annotated_abnormal_days, tie)) {
      out.offsets.push_back(*off);
    } else {
      out.unmatched.push_back(d);
    }
  }
  return out;
}

std::map<int, double> normalized_histogram(std::span<const int> offsets,
                                           const std::map<int, std::size_t>& availability) {
  std::map<int, std::size_t> counts;
  for (int o : offsets) ++counts[o];
  std::map<int, double> out;
  for (const auto& [offset, days] : availability) {
    if (days == 0) continue;
    const auto it = counts.find(offset);
    const double hits = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    out[offset] = hits / static_cast<double>(days);
  }
  return out;
}

void accumulate_availability(std::span<const Day> candidate_days,
                             std::span<const Day> annotated_abnormal_days, TieRule tie,
                             std::map<int, std::size_t>& availability) {
  for (const Day d : candidate_days) {
    if (const auto off = nearest_offset(d, annotated_abnormal_days, tie)) ++availability[*off];
  }
}

std::optional<double> fraction_in_range(std::span<const int> offsets, int lo, int hi) {
  if (offsets.empty()) return std::nullopt;
  const auto inside =
      std::count_if(offsets.begin(), offsets.end(), [&](int o) { return o >= lo && o <= hi; });
  return static_cast<double>(inside) / static_cast<double>(offsets.size());
}

}  // namespace dielwave
