#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dielwave/core_model.hpp"

namespace dielwave {

/// Minutes spent in each barn zone during one hour.
struct ActivityRecord {
  std::string individual_id;
  HourStamp timestamp{};
  double time_resting = 0.0;
  double time_alleys = 0.0;
  double time_eating = 0.0;
};

/// -0.23 * resting + 0.16 * alleys + 0.42 * eating (minutes). Throws
/// ArgumentError for durations outside [0, 60] or summing above 60.
double activity_level(double resting_min, double alleys_min, double eating_min);
double activity_level(const ActivityRecord& record);

struct HourlyObservation {
  std::string individual_id;
  HourStamp timestamp{};
  std::optional<double> activity_level;
};

enum class AnnotationKind { State, Event };

struct Annotation {
  std::string individual_id;
  Day date{};
  AnnotationKind kind = AnnotationKind::State;
  std::string state_type;  // empty for events
};

struct AnnotationCalendar {
  std::vector<Annotation> entries;
};

/// Fuzzy days before/after an abnormal day for one state type.
struct FuzzyWindow {
  int days_before = 0;
  int days_after = 0;
  friend bool operator==(const FuzzyWindow&, const FuzzyWindow&) = default;
};

struct FuzzyPolicy {
  std::map<std::string, FuzzyWindow> windows;

  /// Oestrus (2,1); Calving, Mastitis, Lameness, OtherDisease (2,7);
  /// Accident, LpsInjection (0,7); Acidosis (1,0).
  static FuzzyPolicy defaults();
  /// Throws ConfigError for a state type without an entry.
  const FuzzyWindow& lookup(const std::string& state_type) const;

  friend bool operator==(const FuzzyPolicy&, const FuzzyPolicy&) = default;
};

struct DayKey {
  std::string individual_id;
  Day day{};
  friend auto operator<=>(const DayKey&, const DayKey&) = default;
};

/// Non-normal day labels; days that are absent are Normal.
using DayLabelMap = std::map<DayKey, HourLabel>;

/// State days become Abnormal, the policy's surrounding days Fuzzy. Abnormal
/// always wins over Fuzzy.
DayLabelMap expand_fuzzy(const AnnotationCalendar& calendar, const FuzzyPolicy& policy);

struct DayData {
  std::array<std::optional<double>, 24> hours{};

  /// Mean over the hours that have a value.
  std::optional<double> mean() const;
};

/// individual -> day -> 24 hourly slots.
using DayTable = std::map<std::string, std::map<Day, DayData>>;

/// Throws ArgumentError on a duplicated (individual, hour).
DayTable tabulate(std::span<const HourlyObservation> observations);

enum class ExclusionReason { Event, Sensor };
std::string_view exclusion_reason_name(ExclusionReason r);

struct Exclusion {
  std::string individual_id;
  Day day{};
  ExclusionReason reason = ExclusionReason::Event;
  std::optional<double> mean_activity;
};

struct FilterResult {
  DayTable kept;
  std::vector<Exclusion> log;
};

/// Drops (individual, day) cells carrying an Event annotation or whose mean
/// activity level exceeds `al_cutoff`; every drop is logged.
FilterResult filter_days(const DayTable& table, const AnnotationCalendar& calendar,
                         double al_cutoff = 1000.0);

/// One series per individual from its first to its last kept day. Hours of
/// dropped or unrecorded days become missing values; every hour takes its
/// day's label.
std::vector<LabeledSeries> assemble_series(const DayTable& kept, const DayLabelMap& labels);

struct IngestOptions {
  FuzzyPolicy policy = FuzzyPolicy::defaults();
  double al_cutoff = 1000.0;
  friend bool operator==(const IngestOptions&, const IngestOptions&) = default;
};

struct IngestResult {
  std::vector<LabeledSeries> series;
  std::vector<Exclusion> exclusions;
  DayLabelMap day_labels;
};

IngestResult ingest(std::span<const HourlyObservation> observations,
                    const AnnotationCalendar& calendar, const IngestOptions& options = {});

/// Days with at least one Abnormal hour, per series (in series order).
std::vector<std::vector<Day>> abnormal_days(std::span<const LabeledSeries> series);

}  // namespace dielwave
