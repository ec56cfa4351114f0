#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dielwave/core_model.hpp"
#include "dielwave/errors.hpp"
#include "support.hpp"

using namespace dielwave;
using testing_support::hour0;

namespace {
constexpr auto N = HourLabel::Normal;
constexpr auto A = HourLabel::Abnormal;
constexpr auto F = HourLabel::Fuzzy;
}  // namespace

TEST(WorstCaseLabel, Examples) {
  EXPECT_EQ(worst_case_label(std::vector{N, N, N, N}), N);
  EXPECT_EQ(worst_case_label(std::vector{N, F, N, A}), A);
  EXPECT_EQ(worst_case_label(std::vector{N, F, F, N}), F);
}

TEST(WorstCaseLabel, EmptyThrows) {
  EXPECT_THROW(worst_case_label(std::vector<HourLabel>{}), ArgumentError);
}

TEST(WorstCaseLabel, SingleLabelIsItself) {
  for (auto l : {N, A, F}) EXPECT_EQ(worst_case_label(std::vector{l}), l);
}

TEST(WorstCaseLabel, OrderInvariantAndMonotone) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 2);
  const HourLabel all[] = {N, A, F};
  auto severity = [](HourLabel l) { return l == A ? 2 : l == F ? 1 : 0; };
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<HourLabel> v(1 + trial % 30);
    for (auto& l : v) l = all[pick(rng)];
    const auto base = worst_case_label(v);
    auto shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(worst_case_label(shuffled), base);

    const std::size_t i = rng() % v.size();
    auto up = v;
    if (up[i] == N) up[i] = F;
    EXPECT_GE(severity(worst_case_label(up)), severity(base));
    auto ab = v;
    ab[i] = A;
    EXPECT_EQ(worst_case_label(ab), A);
  }
}

TEST(Labels, CodesRoundTrip) {
  for (auto l : {N, A, F}) EXPECT_EQ(parse_label(label_code(l)), l);
  EXPECT_EQ(parse_label("Abnormal"), A);
  EXPECT_THROW(parse_label("X"), ArgumentError);
}

TEST(Time, PhaseIsHourOfDay) {
  const HourStamp t = hour0() + std::chrono::hours(30);
  EXPECT_EQ(phase_of(t, 24), 6);
  EXPECT_EQ(phase_of(hour0(), 24), 0);
  // Before the epoch the phase still lands in [0, period).
  const HourStamp early{std::chrono::hours(-5)};
  EXPECT_EQ(phase_of(early, 24), 19);
}

TEST(Time, TimestampRoundTrip) {
  const HourStamp t = hour0(2020, 2, 29) + std::chrono::hours(13);
  EXPECT_EQ(format_timestamp(t), "2020-02-29T13:00:00");
  EXPECT_EQ(parse_timestamp("2020-02-29T13:00:00"), t);
  EXPECT_EQ(parse_timestamp("2020-02-29 13:00"), t);
  EXPECT_EQ(parse_timestamp("2020-02-29T13:00:00Z"), t);
  EXPECT_THROW(parse_timestamp("2020-02-29T13:30:00"), ArgumentError);
  EXPECT_THROW(parse_timestamp("2020-02-30T13:00:00"), ArgumentError);
  EXPECT_THROW(parse_timestamp("garbage"), ArgumentError);
  EXPECT_EQ(format_date(parse_date("2021-12-31")), "2021-12-31");
}

TEST(PeriodConfig, Validation) {
  EXPECT_NO_THROW((PeriodConfig{24, 24}.validate()));
  EXPECT_THROW((PeriodConfig{1, 24}.validate()), ArgumentError);
  EXPECT_THROW((PeriodConfig{24, 0}.validate()), ArgumentError);
}

TEST(LabeledSeries, LengthsMustMatch) {
  std::vector<std::optional<double>> v{1.0, std::nullopt, 3.0};
  EXPECT_THROW(LabeledSeries("a", hour0(), v, std::vector<HourLabel>{N, N}), ArgumentError);
  const LabeledSeries s("a", hour0(), v, std::vector<HourLabel>{N, A, N});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_FALSE(s.values()[1].has_value());
  EXPECT_EQ(s.time_at(2), hour0() + std::chrono::hours(2));
  EXPECT_NO_THROW(LabeledSeries("empty", hour0(), {}, {}));
}
