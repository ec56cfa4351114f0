#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dielwave/core_model.hpp"

namespace dielwave {

/// All materialised windows of a dataset plus their partition by label.
/// The three index lists refer into `windows`, are pairwise disjoint and
/// together cover it.
struct WindowSets {
  std::vector<Window> windows;
  std::vector<std::size_t> normal;
  std::vector<std::size_t> abnormal;
  std::vector<std::size_t> fuzzy;

  std::size_t size() const { return windows.size(); }
  /// Appends another set (e.g. from the next individual), re-basing indices.
  void append(WindowSets other);
};

/// Slides a `window_size`-hour window over the series with the given step.
/// Offsets whose window touches a missing hour are skipped. A series shorter
/// than the window yields an empty result.
WindowSets extract_windows(const LabeledSeries& series, const PeriodConfig& config, int step = 1,
                           std::size_t series_index = 0);

/// Windows of every series in order; `series_index` is the position in `dataset`.
WindowSets extract_windows(std::span<const LabeledSeries> dataset, const PeriodConfig& config,
                           int step = 1);

/// Maximal run of windows from one individual whose start offsets advance by
/// exactly one step. Holds indices into the owning window list.
struct ConsecutiveRun {
  std::vector<std::size_t> windows;
};

/// Partitions `subset` into maximal consecutive runs. Runs are ordered by
/// (series, start offset); singletons are allowed.
std::vector<ConsecutiveRun> group_consecutive(std::span<const Window> windows,
                                              std::span<const std::size_t> subset, int step = 1);

struct Split {
  std::vector<std::size_t> train;  // normal windows only
  std::vector<std::size_t> test;   // abnormal + fuzzy + drawn normal runs
  std::uint64_t seed = 0;
  std::size_t test_normal_count = 0;
  /// Every normal run was moved into the test set: either the balance could
  /// not be reached or the training set is empty.
  bool normals_exhausted = false;
};

/// Builds the training and testing sets: the test set starts with all
/// abnormal and fuzzy windows, then whole normal runs are drawn uniformly at
/// random without replacement until the test set holds at least as many
/// normal windows as there are abnormal ones. Fuzzy windows are not counted
/// for the balance. Deterministic for a given seed.
Split build_train_test(const WindowSets& sets, std::uint64_t rng_seed, int step = 1);

}  // namespace dielwave
