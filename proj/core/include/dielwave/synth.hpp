#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dielwave/core_model.hpp"
#include "dielwave/ingest.hpp"

namespace dielwave {

/// Synthetic herd: each individual follows a smooth two-harmonic diel
/// profile with its own level offset, plus hourly Gaussian noise. Annotated
/// state days damp and phase-shift the pattern.
struct SynthParams {
  int individuals = 28;
  int days = 120;
  Day start_date = parse_date("2021-01-04");

  double base_level = 2.0;
  double amplitude = 6.0;         // first harmonic
  double second_amplitude = 3.0;  // 12-hour harmonic
  double peak_hour = 16.0;
  double individual_offset_sd = 1.5;
  double noise = 2.0;  // hourly noise sd

  double missing_rate = 0.0;       // stationary share of missing hours
  double missing_gap_hours = 6.0;  // mean length of a missing stretch

  double anomaly_rate = 0.022;  // share of individual-days annotated abnormal
  double anomaly_shift_hours = 6.0;
  double anomaly_damping = 0.3;  // remaining amplitude on an abnormal day
  double anomaly_level_shift = 0.0;
  /// Days before an abnormal day that already carry half of the effect.
  int precursor_days = 1;
  std::vector<std::string> state_types = {"Oestrus", "Lameness", "Mastitis"};

  double event_rate = 0.0;  // share of individual-days with an event annotation
  double sensor_fault_rate = 0.0;  // days whose values are replaced by implausible ones

  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const SynthParams&, const SynthParams&) = default;
};

struct SynthData {
  std::vector<HourlyObservation> records;  // every hour, missing ones empty
  AnnotationCalendar annotations;
};

/// Noise-free diel profile value at fractional hour-of-day h for an
/// individual with level offset `offset`.
double synth_profile(const SynthParams& p, double hour, double offset);

SynthData synthesize(const SynthParams& params);

}  // namespace dielwave
