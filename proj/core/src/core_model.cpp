#include "dielwave/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "dielwave/errors.hpp"

namespace dielwave {

namespace {

int severity(HourLabel label) {
  switch (label) {
    case HourLabel::Normal: return 0;
    case HourLabel::Fuzzy: return 1;
    case HourLabel::Abnormal: return 2;
  }
  return 0;
}

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("malformed date/time '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string_view label_code(HourLabel label) {
  switch (label) {
    case HourLabel::Normal: return "N";
    case HourLabel::Abnormal: return "A";
    case HourLabel::Fuzzy: return "F";
  }
  return "N";
}

HourLabel parse_label(std::string_view code) {
  if (code == "N" || code == "Normal") return HourLabel::Normal;
  if (code == "A" || code == "Abnormal") return HourLabel::Abnormal;
  if (code == "F" || code == "Fuzzy") return HourLabel::Fuzzy;
  throw ArgumentError("unknown label '" + std::string(code) + "'");
}

std::string_view verdict_name(Verdict v) {
  return v == Verdict::Abnormal ? "Abnormal" : "Normal";
}

WindowLabel worst_case_label(std::span<const HourLabel> hour_labels) {
  if (hour_labels.empty()) {
    throw ArgumentError("worst_case_label: empty label sequence");
  }
  HourLabel worst = HourLabel::Normal;
  for (HourLabel l : hour_labels) {
    if (severity(l) > severity(worst)) worst = l;
    if (worst == HourLabel::Abnormal) break;
  }
  return worst;
}

int phase_of(HourStamp t, int period) {
  const auto h = t.time_since_epoch().count();
  auto r = h % period;
  if (r < 0) r += period;
  return static_cast<int>(r);
}

Day day_of(HourStamp t) { return std::chrono::floor<std::chrono::days>(t); }

std::string format_date(Day d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(HourStamp t) {
  const Day d = day_of(t);
  const auto hour = (t - d).count();
  char buf[8];
  std::snprintf(buf, sizeof buf, "T%02d", static_cast<int>(hour));
  return format_date(d) + buf + ":00:00";
}

Day parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ArgumentError("malformed date '" + std::string(text) + "' (want YYYY-MM-DD)");
  }
  const int y = parse_int(text.substr(0, 4), text);
  const int m = parse_int(text.substr(5, 2), text);
  const int d = parse_int(text.substr(8, 2), text);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month(m),
                                        std::chrono::day(d)};
  if (!ymd.ok()) throw ArgumentError("invalid calendar date '" + std::string(text) + "'");
  return Day{ymd};
}

HourStamp parse_timestamp(std::string_view text) {
  std::string_view t = text;
  if (!t.empty() && (t.back() == 'Z' || t.back() == 'z')) t.remove_suffix(1);
  if (t.size() < 13 || (t[10] != 'T' && t[10] != ' ')) {
    throw ArgumentError("malformed timestamp '" + std::string(text) + "'");
  }
  const Day d = parse_date(t.substr(0, 10));
  const int hour = parse_int(t.substr(11, 2), text);
  if (hour < 0 || hour > 23) throw ArgumentError("hour out of range in '" + std::string(text) + "'");
  std::string_view rest = t.substr(13);
  while (!rest.empty()) {
    if (rest.size() < 3 || rest[0] != ':' || parse_int(rest.substr(1, 2), text) != 0) {
      throw ArgumentError("timestamp '" + std::string(text) + "' is not on an hour boundary");
    }
    rest.remove_prefix(3);
  }
  return HourStamp{d} + std::chrono::hours(hour);
}

void PeriodConfig::validate() const {
  if (period_length < 2) throw ArgumentError("period_length must be >= 2");
  if (window_size < 1) throw ArgumentError("window_size must be >= 1");
}

LabeledSeries::LabeledSeries(std::string individual_id, HourStamp start,
                             std::vector<std::optional<double>> values,
                             std::vector<HourLabel> labels)
    : individual_id_(std::move(individual_id)),
      start_(start),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (values_.size() != labels_.size()) {
    throw ArgumentError("LabeledSeries '" + individual_id_ + "': " +
                        std::to_string(values_.size()) + " values but " +
                        std::to_string(labels_.size()) + " labels");
  }
}

}  // namespace dielwave
