#include "dielwave/ingest.hpp"

#include <algorithm>
#include <set>

#include "dielwave/errors.hpp"

namespace dielwave {

namespace {

constexpr double kRestingWeight = -0.23;
constexpr double kAlleysWeight = 0.16;
constexpr double kEatingWeight = 0.42;
constexpr double kMinutesPerHour = 60.0;

void check_minutes(double v, const char* what) {
  if (!(v >= 0.0 && v <= kMinutesPerHour)) {
    throw ArgumentError(std::string(what) + " duration " + std::to_string(v) +
                        " outside [0, 60] minutes");
  }
}

}  // namespace

double activity_level(double resting_min, double alleys_min, double eating_min) {
  check_minutes(resting_min, "resting");
  check_minutes(alleys_min, "alleys");
  check_minutes(eating_min, "eating");
  // Small slack for minute totals exported with rounding.
  if (resting_min + alleys_min + eating_min > kMinutesPerHour + 1e-9) {
    throw ArgumentError("zone durations sum to more than 60 minutes");
  }
  return kRestingWeight * resting_min + kAlleysWeight * alleys_min + kEatingWeight * eating_min;
}

double activity_level(const ActivityRecord& r) {
  return activity_level(r.time_resting, r.time_alleys, r.time_eating);
}

FuzzyPolicy FuzzyPolicy::defaults() {
  FuzzyPolicy p;
  p.windows = {
      {"Oestrus", {2, 1}},      {"Calving", {2, 7}},  {"Mastitis", {2, 7}},
      {"Lameness", {2, 7}},     {"OtherDisease", {2, 7}}, {"Accident", {0, 7}},
      {"LpsInjection", {0, 7}}, {"Acidosis", {1, 0}},
  };
  return p;
}

const FuzzyWindow& FuzzyPolicy::lookup(const std::string& state_type) const {
  const auto it = windows.find(state_type);
  if (it == windows.end()) {
    throw ConfigError("no fuzzy-day policy for state type '" + state_type + "'");
  }
  return it->second;
}

DayLabelMap expand_fuzzy(const AnnotationCalendar& calendar, const FuzzyPolicy& policy) {
  DayLabelMap labels;
  // Abnormal days first so that fuzzy tails never overwrite them.
  for (const auto& a : calendar.entries) {
    if (a.kind != AnnotationKind::State) continue;
    policy.lookup(a.state_type);
    labels[{a.individual_id, a.date}] = HourLabel::Abnormal;
  }
  for (const auto& a : calendar.entries) {
    if (a.kind != AnnotationKind::State) continue;
    const FuzzyWindow& w = policy.lookup(a.state_type);
    auto mark = [&](int offset) {
      const DayKey key{a.individual_id, a.date + std::chrono::days(offset)};
      labels.try_emplace(key, HourLabel::Fuzzy);
    };
    for (int k = 1; k <= w.days_before; ++k) mark(-k);
    for (int k = 1; k <= w.days_after; ++k) mark(k);
  }
  return labels;
}

std::optional<double> DayData::mean() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& h : hours) {
    if (h) {
      sum += *h;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

DayTable tabulate(std::span<const HourlyObservation> observations) {
  DayTable table;
  std::set<std::pair<std::string, HourStamp>> seen;
  for (const auto& o : observations) {
    if (!seen.emplace(o.individual_id, o.timestamp).second) {
      throw ArgumentError("duplicate record for '" + o.individual_id + "' at " +
                          format_timestamp(o.timestamp));
    }
    const Day d = day_of(o.timestamp);
    const auto hour = static_cast<std::size_t>((o.timestamp - d).count());
    table[o.individual_id][d].hours[hour] = o.activity_level;
  }
  return table;
}

std::string_view exclusion_reason_name(ExclusionReason r) {
  return r == ExclusionReason::Event ? "event" : "sensor";
}

FilterResult filter_days(const DayTable& table, const AnnotationCalendar& calendar,
                         double al_cutoff) {
  std::set<DayKey> events;
  for (const auto& a : calendar.entries) {
    if (a.kind == AnnotationKind::Event) events.insert({a.individual_id, a.date});
  }
  FilterResult out;
  for (const auto& [id, days] : table) {
    for (const auto& [day, data] : days) {
      const auto m = data.mean();
      if (events.contains({id, day})) {
        out.log.push_back({id, day, ExclusionReason::Event, m});
      } else if (m && *m > al_cutoff) {
        out.log.push_back({id, day, ExclusionReason::Sensor, m});
      } else {
        out.kept[id][day] = data;
      }
    }
  }
  return out;
}

std::vector<LabeledSeries> assemble_series(const DayTable& kept, const DayLabelMap& labels) {
  std::vector<LabeledSeries> out;
  for (const auto& [id, days] : kept) {
    if (days.empty()) continue;
    const Day first = days.begin()->first;
    const Day last = days.rbegin()->first;
    const auto n_days = static_cast<std::size_t>((last - first).count() + 1);
    std::vector<std::optional<double>> values;
    std::vector<HourLabel> hour_labels;
    values.reserve(n_days * 24);
    hour_labels.reserve(n_days * 24);
    for (std::size_t k = 0; k < n_days; ++k) {
      const Day d = first + std::chrono::days(k);
      const auto lab = labels.find({id, d});
      const HourLabel label = lab == labels.end() ? HourLabel::Normal : lab->second;
      const auto it = days.find(d);
      for (std::size_t h = 0; h < 24; ++h) {
        values.push_back(it == days.end() ? std::nullopt : it->second.hours[h]);
        hour_labels.push_back(label);
      }
    }
    out.emplace_back(id, HourStamp{first}, std::move(values), std::move(hour_labels));
  }
  return out;
}

IngestResult ingest(std::span<const HourlyObservation> observations,
                    const AnnotationCalendar& calendar, const IngestOptions& options) {
  IngestResult out;
  out.day_labels = expand_fuzzy(calendar, options.policy);
  FilterResult filtered = filter_days(tabulate(observations), calendar, options.al_cutoff);
  out.exclusions = std::move(filtered.log);
  out.series = assemble_series(filtered.kept, out.day_labels);
  return out;
}

std::vector<std::vector<Day>> abnormal_days(std::span<const LabeledSeries> series) {
  std::vector<std::vector<Day>> out;
  out.reserve(series.size());
  for (const auto& s : series) {
    std::vector<Day> days;
    for (std::size_t h = 0; h < s.size(); ++h) {
      if (s.labels()[h] != HourLabel::Abnormal) continue;
      const Day d = day_of(s.time_at(h));
      if (days.empty() || days.back() != d) days.push_back(d);
    }
    out.push_back(std::move(days));
  }
  return out;
}

}  // namespace dielwave
