#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "data/pywt_reference.hpp"
#include "dielwave/errors.hpp"
#include "dielwave/wavelet.hpp"
#include "support.hpp"

using namespace dielwave;
using testing_support::max_abs_diff;
using testing_support::oracle_analysis;
using testing_support::random_signal;

namespace {

WaveletFamily fam(std::string_view name) { return *parse_family(name); }

const refdata::FilterTaps& taps(WaveletFamily f) {
  for (const auto& t : refdata::filters()) {
    if (t.family == family_name(f)) return t;
  }
  throw std::logic_error("no reference taps");
}

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(FilterBank, MatchesReferenceTaps) {
  for (auto f : all_families()) {
    const auto& bank = filter_bank(f);
    const auto& ref = taps(f);
    EXPECT_LT(max_abs_diff(vec(bank.decomposition_lowpass), ref.dec_lo), 1e-15) << family_name(f);
    EXPECT_LT(max_abs_diff(vec(bank.decomposition_highpass), ref.dec_hi), 1e-15) << family_name(f);
    EXPECT_LT(max_abs_diff(vec(bank.reconstruction_lowpass), ref.rec_lo), 1e-15) << family_name(f);
    EXPECT_LT(max_abs_diff(vec(bank.reconstruction_highpass), ref.rec_hi), 1e-15) << family_name(f);
  }
}

TEST(FilterBank, LowpassSumsToSqrt2AndOrthogonalReversal) {
  for (auto f : all_families()) {
    const auto& bank = filter_bank(f);
    const double sum = std::accumulate(bank.decomposition_lowpass.begin(), bank.decomposition_lowpass.end(), 0.0);
    EXPECT_NEAR(sum, std::sqrt(2.0), 1e-12) << family_name(f);
    if (bank.orthogonal) {
      const auto L = bank.length();
      for (std::size_t i = 0; i < L; ++i) {
        EXPECT_NEAR(bank.reconstruction_lowpass[i], bank.decomposition_lowpass[L - 1 - i], 1e-15);
      }
    }
  }
  for (auto f : {WaveletFamily::Haar, WaveletFamily::Db2, WaveletFamily::Db3, WaveletFamily::Coif1}) {
    EXPECT_TRUE(filter_bank(f).orthogonal);
  }
}

TEST(Families, NamesRoundTrip) {
  EXPECT_EQ(all_families().size(), kWaveletFamilyCount);
  for (auto f : all_families()) EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_FALSE(parse_family("sym4").has_value());
  const auto spec = WaveletSpec::parse("bior1.3:2");
  EXPECT_EQ(spec.family, WaveletFamily::Bior1_3);
  EXPECT_EQ(spec.level, 2);
  EXPECT_EQ(spec.name(), "bior1.3|2");
  EXPECT_THROW(WaveletSpec::parse("haar|x"), ArgumentError);
  EXPECT_THROW(WaveletSpec::parse("nope|1"), ArgumentError);
}

TEST(MaxLevel, Examples) {
  EXPECT_EQ(max_level(WaveletFamily::Haar, 24), 4);
  EXPECT_EQ(max_level(WaveletFamily::Db3, 24), 2);
  EXPECT_EQ(max_level(WaveletFamily::Haar, 1), 0);
  for (auto f : all_families()) EXPECT_EQ(max_level(f, 24), taps(f).max_level_24) << family_name(f);
}

TEST(MaxLevel, MatchesFormulaForManyLengths) {
  for (auto f : all_families()) {
    const double L = static_cast<double>(filter_bank(f).length());
    for (std::size_t n = 1; n < 300; ++n) {
      const int expected = std::max(0, static_cast<int>(std::floor(std::log2(n / (L - 1.0)) + 1e-12)));
      EXPECT_EQ(max_level(f, n), expected) << family_name(f) << " n=" << n;
    }
  }
}

TEST(Catalog, TwentyThreeSpecsAllFeasibleAt24) {
  const auto cat = default_wavelet_catalog();
  ASSERT_EQ(cat.size(), 23u);
  for (const auto& s : cat) EXPECT_LE(s.level, max_level(s.family, 24)) << s.name();
  for (auto f : all_families()) {
    int count = 0;
    for (const auto& s : cat) count += s.family == f;
    EXPECT_EQ(count, max_level(f, 24)) << family_name(f);
  }
}

TEST(DwtApprox, HandExamples) {
  const double r2 = std::sqrt(2.0);
  EXPECT_LT(max_abs_diff(dwt_approx(std::vector{1.0, 1.0, 1.0, 1.0}, {WaveletFamily::Haar, 1}), {r2, r2}), 1e-15);
  EXPECT_LT(max_abs_diff(dwt_approx(std::vector{1.0, 3.0}, {WaveletFamily::Haar, 1}), {2 * r2}), 1e-15);
  const auto full = dwt_full(std::vector{1.0, 3.0}, {WaveletFamily::Haar, 1});
  ASSERT_EQ(full.details.size(), 1u);
  EXPECT_LT(max_abs_diff(full.details[0], {-r2}), 1e-15);
}

TEST(DwtApprox, LevelTooHighNamesTheMaximum) {
  try {
    dwt_approx(std::vector<double>(24, 1.0), {WaveletFamily::Db3, 3});
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(DwtApprox, MatchesReferenceValues) {
  for (const auto& a : refdata::approximations()) {
    const WaveletSpec spec{fam(a.family), a.level};
    EXPECT_LT(max_abs_diff(dwt_approx(refdata::signal, spec), a.symmetric), 1e-12) << spec.name();
  }
}

TEST(DwtApprox, MatchesPadConvolveDecimateOracle) {
  std::mt19937_64 rng(21);
  for (auto f : all_families()) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + rng() % 60;
      const auto x = random_signal(rng, n);
      std::vector<double> cur = x;
      for (int l = 1; l <= max_level(f, n); ++l) {
        cur = oracle_analysis(cur, taps(f).dec_lo);
        EXPECT_LT(max_abs_diff(dwt_approx(x, {f, l}), cur), 1e-12) << family_name(f) << " n=" << n;
      }
      const auto step = dwt_step(x, f);
      EXPECT_LT(max_abs_diff(step.detail, oracle_analysis(x, taps(f).dec_hi)), 1e-12);
    }
  }
}

TEST(DwtFull, LengthsAndIdentityLevel) {
  std::mt19937_64 rng(4);
  const auto x = random_signal(rng, 16);
  const auto d = dwt_full(x, {WaveletFamily::Haar, 4});
  EXPECT_EQ(d.approx.size(), 1u);
  ASSERT_EQ(d.details.size(), 4u);
  EXPECT_EQ(d.details[0].size(), 8u);
  EXPECT_EQ(d.details[3].size(), 1u);
  const auto id = dwt_full(x, {WaveletFamily::Db2, 0});
  EXPECT_EQ(id.approx, x);
  EXPECT_TRUE(id.details.empty());
  EXPECT_EQ(idwt(id, WaveletFamily::Db2), x);
}

TEST(DwtFull, LengthRecurrenceOnCatalog) {
  const std::vector<double> x(24, 0.5);
  for (const auto& s : default_wavelet_catalog()) {
    const auto d = dwt_full(x, s);
    std::size_t n = 24;
    const std::size_t L = filter_bank(s.family).length();
    for (int l = 0; l < s.level; ++l) {
      EXPECT_EQ(d.input_lengths[l], n);
      n = (n + L - 1) / 2;
      EXPECT_EQ(d.details[l].size(), n);
      EXPECT_EQ(stage_output_length(s.family, d.input_lengths[l]), n);
    }
    EXPECT_EQ(d.approx.size(), n) << s.name();
  }
}

TEST(Idwt, RoundTrips) {
  EXPECT_LT(max_abs_diff(idwt(dwt_full(std::vector{1.0, 2.0, 3.0, 4.0}, {WaveletFamily::Haar, 2}), WaveletFamily::Haar),
                         {1, 2, 3, 4}),
            1e-12);
  std::mt19937_64 rng(8);
  for (auto f : all_families()) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 2 + rng() % 70;
      const auto x = random_signal(rng, n);
      for (int l = 1; l <= max_level(f, n); ++l) {
        EXPECT_LT(max_abs_diff(idwt(dwt_full(x, {f, l}), f), x), 1e-9) << family_name(f) << " n=" << n << " l=" << l;
      }
    }
  }
}

TEST(Idwt, InconsistentLengthsThrow) {
  auto d = dwt_full(std::vector<double>(24, 1.0), {WaveletFamily::Db2, 2});
  d.details[0].pop_back();
  EXPECT_THROW(idwt(d, WaveletFamily::Db2), ArgumentError);
  auto e = dwt_full(std::vector<double>(24, 1.0), {WaveletFamily::Db2, 2});
  e.approx.push_back(0.0);
  EXPECT_THROW(idwt(e, WaveletFamily::Db2), ArgumentError);
  EXPECT_THROW(idwt_step(std::vector{1.0}, std::vector{1.0, 2.0}, WaveletFamily::Haar, 2), ArgumentError);
}

TEST(ApproximationSignal, MatchesReferenceReconstruction) {
  for (const auto& a : refdata::approximations()) {
    const WaveletSpec spec{fam(a.family), a.level};
    EXPECT_LT(max_abs_diff(approximation_signal(refdata::signal, spec), a.reconstruction), 1e-12) << spec.name();
  }
}

TEST(Periodization, MatchesReferenceAndPreservesEnergy) {
  for (const auto& p : refdata::periodized()) {
    const auto f = fam(p.family);
    const auto out = dwt_step(refdata::signal, f, Padding::Periodization);
    EXPECT_LT(max_abs_diff(out.approx, p.approx), 1e-12) << p.family;
    EXPECT_LT(max_abs_diff(out.detail, p.detail), 1e-12) << p.family;
  }
  std::mt19937_64 rng(13);
  for (auto f : all_families()) {
    for (std::size_t n : {8u, 16u, 32u, 64u}) {
      const auto x = random_signal(rng, n);
      const auto out = dwt_step(x, f, Padding::Periodization);
      EXPECT_LT(max_abs_diff(idwt_step(out.approx, out.detail, f, n, Padding::Periodization), x), 1e-9);
      if (!filter_bank(f).orthogonal) continue;
      auto energy = [](const std::vector<double>& v) {
        return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
      };
      EXPECT_NEAR(energy(out.approx) + energy(out.detail), energy(x), 1e-9 * energy(x)) << family_name(f);
    }
  }
  EXPECT_THROW(dwt_step(std::vector<double>(5, 1.0), WaveletFamily::Haar, Padding::Periodization), ArgumentError);
}

TEST(DwtApprox, Linearity) {
  std::mt19937_64 rng(17);
  for (const auto& s : default_wavelet_catalog()) {
    const auto x = random_signal(rng, 24), y = random_signal(rng, 24);
    std::vector<double> z(24);
    for (int i = 0; i < 24; ++i) z[i] = 1.5 * x[i] - 0.25 * y[i];
    const auto ax = dwt_approx(x, s), ay = dwt_approx(y, s), az = dwt_approx(z, s);
    for (std::size_t i = 0; i < az.size(); ++i) EXPECT_NEAR(az[i], 1.5 * ax[i] - 0.25 * ay[i], 1e-10);
  }
}

TEST(DwtApprox, HaarConstantScaling) {
  for (int l = 1; l <= 4; ++l) {
    const auto a = dwt_approx(std::vector<double>(24, 3.0), {WaveletFamily::Haar, l});
    for (double v : a) EXPECT_NEAR(v, 3.0 * std::pow(2.0, l / 2.0), 1e-12);
  }
}
