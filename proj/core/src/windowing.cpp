#include "dielwave/windowing.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "dielwave/errors.hpp"

namespace dielwave {

void WindowSets::append(WindowSets other) {
  const std::size_t base = windows.size();
  auto shift = [base](std::vector<std::size_t>& dst, const std::vector<std::size_t>& src) {
    for (std::size_t i : src) dst.push_back(i + base);
  };
  shift(normal, other.normal);
  shift(abnormal, other.abnormal);
  shift(fuzzy, other.fuzzy);
  std::move(other.windows.begin(), other.windows.end(), std::back_inserter(windows));
}

WindowSets extract_windows(const LabeledSeries& series, const PeriodConfig& config, int step,
                           std::size_t series_index) {
  config.validate();
  if (step < 1) throw ArgumentError("window step must be >= 1");

  WindowSets out;
  const auto q = static_cast<std::size_t>(config.window_size);
  const std::size_t n = series.size();
  if (q > n) return out;

  const auto& values = series.values();
  const auto& labels = series.labels();
  const int start_phase = phase_of(series.start(), config.period_length);

  // next_missing[i]: first missing index >= i (n if none).
  std::vector<std::size_t> next_missing(n + 1, n);
  for (std::size_t i = n; i-- > 0;) {
    next_missing[i] = values[i].has_value() ? next_missing[i + 1] : i;
  }

  for (std::size_t i = 0; i + q <= n; i += static_cast<std::size_t>(step)) {
    if (next_missing[i] < i + q) continue;
    Window w;
    w.individual_id = series.individual_id();
    w.series_index = series_index;
    w.start_index = static_cast<std::int64_t>(i);
    w.start_hour_of_period =
        static_cast<int>((i + static_cast<std::size_t>(start_phase)) %
                         static_cast<std::size_t>(config.period_length));
    w.values.reserve(q);
    for (std::size_t k = i; k < i + q; ++k) w.values.push_back(*values[k]);
    w.label = worst_case_label(std::span(labels).subspan(i, q));

    const std::size_t idx = out.windows.size();
    switch (w.label) {
      case WindowLabel::Normal: out.normal.push_back(idx); break;
      case WindowLabel::Abnormal: out.abnormal.push_back(idx); break;
      case WindowLabel::Fuzzy: out.fuzzy.push_back(idx); break;
    }
    out.windows.push_back(std::move(w));
  }
  return out;
}

WindowSets extract_windows(std::span<const LabeledSeries> dataset, const PeriodConfig& config,
                           int step) {
  WindowSets all;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    all.append(extract_windows(dataset[s], config, step, s));
  }
  return all;
}

std::vector<ConsecutiveRun> group_consecutive(std::span<const Window> windows,
                                              std::span<const std::size_t> subset, int step) {
  if (step < 1) throw ArgumentError("window step must be >= 1");
  std::vector<std::size_t> order(subset.begin(), subset.end());
  auto key = [&](std::size_t i) {
    const Window& w = windows[i];
    return std::tie(w.series_index, w.individual_id, w.start_index);
  };
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  std::vector<ConsecutiveRun> runs;
  for (std::size_t i : order) {
    if (!runs.empty()) {
      const Window& prev = windows[runs.back().windows.back()];
      const Window& cur = windows[i];
      if (prev.series_index == cur.series_index && prev.individual_id == cur.individual_id &&
          cur.start_index - prev.start_index == step) {
        runs.back().windows.push_back(i);
        continue;
      }
    }
    runs.push_back(ConsecutiveRun{{i}});
  }
  return runs;
}

Split build_train_test(const WindowSets& sets, std::uint64_t rng_seed, int step) {
  Split split;
  split.seed = rng_seed;
  split.test.reserve(sets.abnormal.size() + sets.fuzzy.size());
  split.test.insert(split.test.end(), sets.abnormal.begin(), sets.abnormal.end());
  split.test.insert(split.test.end(), sets.fuzzy.begin(), sets.fuzzy.end());

  std::vector<ConsecutiveRun> runs = group_consecutive(sets.windows, sets.normal, step);
  std::mt19937_64 rng(rng_seed);
  std::shuffle(runs.begin(), runs.end(), rng);

  std::size_t taken = 0;
  while (split.test_normal_count < sets.abnormal.size() && taken < runs.size()) {
    const auto& run = runs[taken++].windows;
    split.test.insert(split.test.end(), run.begin(), run.end());
    split.test_normal_count += run.size();
  }
  split.normals_exhausted = !sets.abnormal.empty() && taken == runs.size();
  for (std::size_t r = taken; r < runs.size(); ++r) {
    split.train.insert(split.train.end(), runs[r].windows.begin(), runs[r].windows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace dielwave
