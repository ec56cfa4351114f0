#include "dielwave/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>
#include <cstdio>
#include <iterator>

#include "dielwave/errors.hpp"
#include "dielwave/stats.hpp"

namespace dielwave {

void SynthParams::validate() const {
  if (individuals < 1 || days < 1) throw ConfigError("synth: individuals and days must be positive");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(missing_rate) || missing_rate >= 1.0) throw ConfigError("synth: missing_rate must be in [0, 1)");
  if (!unit(anomaly_rate) || !unit(event_rate) || !unit(sensor_fault_rate) ||
      anomaly_rate + event_rate + sensor_fault_rate > 1.0) {
    throw ConfigError("synth: anomaly, event and sensor-fault rates must be in [0, 1] and sum to at most 1");
  }
  if (missing_gap_hours < 1.0) throw ConfigError("synth: missing_gap_hours must be >= 1");
  if (noise < 0.0 || individual_offset_sd < 0.0) throw ConfigError("synth: noise must be >= 0");
  if (precursor_days < 0) throw ConfigError("synth: precursor_days must be >= 0");
  if (anomaly_rate > 0.0 && state_types.empty()) throw ConfigError("synth: no state types to annotate");
}

double synth_profile(const SynthParams& p, double hour, double offset) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return p.base_level + offset + p.amplitude * std::cos(two_pi * (hour - p.peak_hour) / 24.0) +
         p.second_amplitude * std::cos(2.0 * two_pi * (hour - p.peak_hour) / 24.0);
}

namespace {

// Picks `count` distinct cells of [0, total) not in `taken`.
std::vector<std::size_t> draw_cells(std::size_t total, std::size_t count, std::set<std::size_t>& taken,
                                    std::mt19937_64& rng) {
  std::vector<std::size_t> free;
  free.reserve(total - taken.size());
  for (std::size_t i = 0; i < total; ++i) {
    if (!taken.contains(i)) free.push_back(i);
  }
  count = std::min(count, free.size());
  std::vector<std::size_t> out;
  std::sample(free.begin(), free.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(count), rng);
  taken.insert(out.begin(), out.end());
  return out;
}

}  // namespace

SynthData synthesize(const SynthParams& p) {
  p.validate();
  std::mt19937_64 layout_rng(mix_seed(p.seed, 1));
  const auto n_ind = static_cast<std::size_t>(p.individuals);
  const auto n_days = static_cast<std::size_t>(p.days);
  const std::size_t cells = n_ind * n_days;
  auto cell_count = [&](double rate) {
    return static_cast<std::size_t>(std::llround(rate * static_cast<double>(cells)));
  };

  std::set<std::size_t> taken;
  const auto anomaly_cells = draw_cells(cells, cell_count(p.anomaly_rate), taken, layout_rng);
  const auto event_cells = draw_cells(cells, cell_count(p.event_rate), taken, layout_rng);
  const auto fault_cells = draw_cells(cells, cell_count(p.sensor_fault_rate), taken, layout_rng);

  // 0 = normal, 1 = half effect, 2 = full effect, 3 = sensor fault
  std::vector<int> effect(cells, 0);
  std::vector<std::string> ids(n_ind);
  for (std::size_t i = 0; i < n_ind; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "cow%03zu", i + 1);
    ids[i] = buf;
  }

  SynthData out;
  std::uniform_int_distribution<std::size_t> pick_state(0, p.state_types.empty() ? 0 : p.state_types.size() - 1);
  for (std::size_t c : anomaly_cells) {
    effect[c] = 2;
    out.annotations.entries.push_back({ids[c / n_days], p.start_date + std::chrono::days(c % n_days),
                                       AnnotationKind::State, p.state_types[pick_state(layout_rng)]});
  }
  for (std::size_t c : anomaly_cells) {
    const std::size_t day = c % n_days;
    for (int k = 1; k <= p.precursor_days && static_cast<std::size_t>(k) <= day; ++k) {
      if (effect[c - k] == 0) effect[c - k] = 1;
    }
  }
  for (std::size_t c : event_cells) {
    out.annotations.entries.push_back({ids[c / n_days], p.start_date + std::chrono::days(c % n_days),
                                       AnnotationKind::Event, ""});
  }
  for (std::size_t c : fault_cells) effect[c] = 3;
  std::sort(out.annotations.entries.begin(), out.annotations.entries.end(),
            [](const Annotation& a, const Annotation& b) {
              return std::tie(a.individual_id, a.date) < std::tie(b.individual_id, b.date);
            });

  const double leave = p.missing_rate > 0.0 ? 1.0 / p.missing_gap_hours : 1.0;
  const double enter = p.missing_rate > 0.0 ? p.missing_rate / (1.0 - p.missing_rate) * leave : 0.0;
  if (enter > 1.0) throw ConfigError("synth: missing_rate too high for the requested gap length");

  out.records.reserve(cells * 24);
  for (std::size_t i = 0; i < n_ind; ++i) {
    std::mt19937_64 rng(mix_seed(p.seed, 100 + i));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double offset = p.individual_offset_sd * gauss(rng);
    bool missing = unit(rng) < p.missing_rate;
    for (std::size_t d = 0; d < n_days; ++d) {
      const int e = effect[i * n_days + d];
      const HourStamp day_start =
          std::chrono::time_point_cast<std::chrono::hours>(p.start_date + std::chrono::days(d));
      for (int h = 0; h < 24; ++h) {
        double v = synth_profile(p, h, offset);
        if (e == 1 || e == 2) {
          const double strength = e == 2 ? 1.0 : 0.5;
          const double shifted = synth_profile(p, h - p.anomaly_shift_hours, offset);
          const double level = p.base_level + offset;
          const double damped = level + p.anomaly_damping * (shifted - level) + p.anomaly_level_shift;
          v = (1.0 - strength) * v + strength * damped;
        }
        v += p.noise * gauss(rng);
        if (e == 3) v = 2000.0 + 100.0 * unit(rng);
        const bool now_missing = missing;
        missing = missing ? unit(rng) >= leave : unit(rng) < enter;
        HourlyObservation obs{ids[i], day_start + std::chrono::hours(h), std::nullopt};
        if (!now_missing) obs.activity_level = v;
        out.records.push_back(std::move(obs));
      }
    }
  }
  return out;
}

}  // namespace dielwave
