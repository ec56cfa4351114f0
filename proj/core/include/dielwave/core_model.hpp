#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dielwave {

/// Per-hour annotation state. Missing data is never a label; it is carried
/// structurally as an empty value in LabeledSeries.
enum class HourLabel : std::uint8_t { Normal, Abnormal, Fuzzy };

/// Windows use the same three states as hours.
using WindowLabel = HourLabel;

/// Binary detector output for a window, hour or day.
enum class Verdict : std::uint8_t { Normal, Abnormal };

std::string_view label_code(HourLabel label);  // "N", "A", "F"
HourLabel parse_label(std::string_view code);
std::string_view verdict_name(Verdict v);

/// Abnormal if any hour is abnormal, else Fuzzy if any hour is fuzzy, else
/// Normal. Throws ArgumentError on an empty sequence.
WindowLabel worst_case_label(std::span<const HourLabel> hour_labels);

using HourStamp = std::chrono::sys_time<std::chrono::hours>;
using Day = std::chrono::sys_days;

/// Hours since the Unix epoch, reduced modulo `period` into [0, period).
/// For period 24 this is the UTC hour of day.
int phase_of(HourStamp t, int period);

Day day_of(HourStamp t);

std::string format_timestamp(HourStamp t);  // YYYY-MM-DDTHH:00:00
std::string format_date(Day d);             // YYYY-MM-DD
/// Accepts `YYYY-MM-DD[T| ]HH[:MM[:SS]]` with optional trailing `Z`.
/// Minutes and seconds must be zero.
HourStamp parse_timestamp(std::string_view text);
Day parse_date(std::string_view text);

struct PeriodConfig {
  int period_length = 24;  // hours per period
  int window_size = 24;    // hours per window

  void validate() const;
  friend bool operator==(const PeriodConfig&, const PeriodConfig&) = default;
};

/// One individual's hourly observations. Entry i is at start + i hours;
/// gaps are explicit empty values. Immutable after construction.
class LabeledSeries {
 public:
  LabeledSeries() = default;
  LabeledSeries(std::string individual_id, HourStamp start,
                std::vector<std::optional<double>> values,
                std::vector<HourLabel> labels);

  const std::string& individual_id() const { return individual_id_; }
  HourStamp start() const { return start_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::optional<double>>& values() const { return values_; }
  const std::vector<HourLabel>& labels() const { return labels_; }
  HourStamp time_at(std::size_t i) const { return start_ + std::chrono::hours(i); }

 private:
  std::string individual_id_;
  HourStamp start_{};
  std::vector<std::optional<double>> values_;
  std::vector<HourLabel> labels_;
};

struct Window {
  std::string individual_id;
  std::size_t series_index = 0;  // position of the source series in its dataset
  std::int64_t start_index = 0;  // offset into the source series
  int start_hour_of_period = 0;
  std::vector<double> values;
  WindowLabel label = WindowLabel::Normal;
};

}  // namespace dielwave
