#include "dielwave/wavelet.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "dielwave/errors.hpp"

namespace dielwave {

namespace {

// Filter taps as tabulated by PyWavelets (pywt.Wavelet(name).dec_lo etc.),
// copied to full double precision. Biorthogonal entries are multiples of
// sqrt(2)/16; leading/trailing zeros keep the analysis and synthesis pairs
// aligned at a common length.

constexpr std::array<double, 2> kHaarDecLo{0.7071067811865476, 0.7071067811865476};
constexpr std::array<double, 2> kHaarDecHi{-0.7071067811865476, 0.7071067811865476};
constexpr std::array<double, 2> kHaarRecLo{0.7071067811865476, 0.7071067811865476};
constexpr std::array<double, 2> kHaarRecHi{0.7071067811865476, -0.7071067811865476};

constexpr std::array<double, 4> kDb2DecLo{-0.12940952255126037, 0.2241438680420134,
                                          0.8365163037378079, 0.48296291314453416};
constexpr std::array<double, 4> kDb2DecHi{-0.48296291314453416, 0.8365163037378079,
                                          -0.2241438680420134, -0.12940952255126037};
constexpr std::array<double, 4> kDb2RecLo{0.48296291314453416, 0.8365163037378079,
                                          0.2241438680420134, -0.12940952255126037};
constexpr std::array<double, 4> kDb2RecHi{-0.12940952255126037, -0.2241438680420134,
                                          0.8365163037378079, -0.48296291314453416};

constexpr std::array<double, 6> kDb3DecLo{0.03522629188570953,  -0.08544127388202666,
                                          -0.13501102001025458, 0.45987750211849154,
                                          0.8068915093110925,   0.33267055295008263};
constexpr std::array<double, 6> kDb3DecHi{-0.33267055295008263, 0.8068915093110925,
                                          -0.45987750211849154, -0.13501102001025458,
                                          0.08544127388202666,  0.03522629188570953};
constexpr std::array<double, 6> kDb3RecLo{0.33267055295008263,  0.8068915093110925,
                                          0.45987750211849154,  -0.13501102001025458,
                                          -0.08544127388202666, 0.03522629188570953};
constexpr std::array<double, 6> kDb3RecHi{0.03522629188570953,  0.08544127388202666,
                                          -0.13501102001025458, -0.45987750211849154,
                                          0.8068915093110925,   -0.33267055295008263};

constexpr std::array<double, 6> kCoif1DecLo{-0.015655728135791993, -0.07273261951252645,
                                            0.3848648468648578,    0.8525720202116004,
                                            0.3378976624574818,    -0.07273261951252645};
constexpr std::array<double, 6> kCoif1DecHi{0.07273261951252645, 0.3378976624574818,
                                            -0.8525720202116004, 0.3848648468648578,
                                            0.07273261951252645, -0.015655728135791993};
constexpr std::array<double, 6> kCoif1RecLo{-0.07273261951252645, 0.3378976624574818,
                                            0.8525720202116004,   0.3848648468648578,
                                            -0.07273261951252645, -0.015655728135791993};
constexpr std::array<double, 6> kCoif1RecHi{-0.015655728135791993, 0.07273261951252645,
                                            0.3848648468648578,    -0.8525720202116004,
                                            0.3378976624574818,    0.07273261951252645};

constexpr double k1 = 0.08838834764831845;  // sqrt(2) / 16
constexpr double k2 = 0.1767766952966369;   // sqrt(2) / 8
constexpr double k4 = 0.3535533905932738;   // sqrt(2) / 4
constexpr double k6 = 0.5303300858899106;   // 3 sqrt(2) / 8
constexpr double k8 = 0.7071067811865476;   // sqrt(2) / 2
constexpr double k12 = 1.0606601717798212;  // 3 sqrt(2) / 4

constexpr std::array<double, 6> kBior13DecLo{-k1, k1, k8, k8, k1, -k1};
constexpr std::array<double, 6> kBior13DecHi{0.0, 0.0, -k8, k8, 0.0, 0.0};
constexpr std::array<double, 6> kBior13RecLo{0.0, 0.0, k8, k8, 0.0, 0.0};
constexpr std::array<double, 6> kBior13RecHi{-k1, -k1, k8, -k8, k1, k1};

constexpr std::array<double, 6> kBior22DecLo{0.0, -k2, k4, k12, k4, -k2};
constexpr std::array<double, 6> kBior22DecHi{0.0, k4, -k8, k4, 0.0, 0.0};
constexpr std::array<double, 6> kBior22RecLo{0.0, k4, k8, k4, 0.0, 0.0};
constexpr std::array<double, 6> kBior22RecHi{0.0, k2, k4, -k12, k4, k2};

constexpr std::array<double, 4> kBior31DecLo{-k4, k12, k12, -k4};
constexpr std::array<double, 4> kBior31DecHi{-k2, k6, -k6, k2};
constexpr std::array<double, 4> kBior31RecLo{k2, k6, k6, k2};
constexpr std::array<double, 4> kBior31RecHi{-k4, -k12, k12, k4};

constexpr std::array<double, 6> kRbio22DecLo{0.0, 0.0, k4, k8, k4, 0.0};
constexpr std::array<double, 6> kRbio22DecHi{k2, k4, -k12, k4, k2, 0.0};
constexpr std::array<double, 6> kRbio22RecLo{-k2, k4, k12, k4, -k2, 0.0};
constexpr std::array<double, 6> kRbio22RecHi{0.0, 0.0, k4, -k8, k4, 0.0};

constexpr std::array<double, 4> kRbio31DecLo{k2, k6, k6, k2};
constexpr std::array<double, 4> kRbio31DecHi{k4, k12, -k12, -k4};
constexpr std::array<double, 4> kRbio31RecLo{-k4, k12, k12, -k4};
constexpr std::array<double, 4> kRbio31RecHi{k2, -k6, k6, -k2};

template <std::size_t N>
FilterBank make_bank(const std::array<double, N>& dl, const std::array<double, N>& dh,
                     const std::array<double, N>& rl, const std::array<double, N>& rh,
                     bool orthogonal) {
  return FilterBank{dl, dh, rl, rh, orthogonal};
}

constexpr std::array<WaveletFamily, kWaveletFamilyCount> kFamilies{
    WaveletFamily::Haar,    WaveletFamily::Db2,     WaveletFamily::Db3,
    WaveletFamily::Coif1,   WaveletFamily::Bior1_3, WaveletFamily::Bior2_2,
    WaveletFamily::Bior3_1, WaveletFamily::Rbio2_2, WaveletFamily::Rbio3_1};

constexpr std::array<std::string_view, kWaveletFamilyCount> kFamilyNames{
    "haar", "db2", "db3", "coif1", "bior1.3", "bior2.2", "bior3.1", "rbio2.2", "rbio3.1"};

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x(n-1) | x(n-1) x(n-2) ...
inline double symmetric_at(std::span<const double> x, std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? x[static_cast<std::size_t>(i)] : x[static_cast<std::size_t>(period - 1 - i)];
}

inline std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  i %= sn;
  if (i < 0) i += sn;
  return static_cast<std::size_t>(i);
}

void require_stage_input(std::size_t n, Padding padding) {
  if (n == 0) throw ArgumentError("wavelet stage on an empty signal");
  if (padding == Padding::Periodization && n % 2 != 0) {
    throw ArgumentError("periodization padding needs an even length at every stage, got " +
                        std::to_string(n));
  }
}

void require_level(const WaveletSpec& spec, std::size_t length) {
  if (spec.level < 0) throw ArgumentError("negative wavelet level");
  const int top = max_level(spec.family, length);
  if (spec.level > top) {
    throw ArgumentError(spec.name() + ": level " + std::to_string(spec.level) +
                        " exceeds the maximum level " + std::to_string(top) +
                        " for signal length " + std::to_string(length));
  }
}

}  // namespace

std::string_view family_name(WaveletFamily family) {
  return kFamilyNames[static_cast<std::size_t>(family)];
}

std::optional<WaveletFamily> parse_family(std::string_view name) {
  for (std::size_t i = 0; i < kFamilies.size(); ++i) {
    if (kFamilyNames[i] == name) return kFamilies[i];
  }
  return std::nullopt;
}

std::span<const WaveletFamily> all_families() { return kFamilies; }

const FilterBank& filter_bank(WaveletFamily family) {
  static const std::array<FilterBank, kWaveletFamilyCount> banks{
      make_bank(kHaarDecLo, kHaarDecHi, kHaarRecLo, kHaarRecHi, true),
      make_bank(kDb2DecLo, kDb2DecHi, kDb2RecLo, kDb2RecHi, true),
      make_bank(kDb3DecLo, kDb3DecHi, kDb3RecLo, kDb3RecHi, true),
      make_bank(kCoif1DecLo, kCoif1DecHi, kCoif1RecLo, kCoif1RecHi, true),
      make_bank(kBior13DecLo, kBior13DecHi, kBior13RecLo, kBior13RecHi, false),
      make_bank(kBior22DecLo, kBior22DecHi, kBior22RecLo, kBior22RecHi, false),
      make_bank(kBior31DecLo, kBior31DecHi, kBior31RecLo, kBior31RecHi, false),
      make_bank(kRbio22DecLo, kRbio22DecHi, kRbio22RecLo, kRbio22RecHi, false),
      make_bank(kRbio31DecLo, kRbio31DecHi, kRbio31RecLo, kRbio31RecHi, false),
  };
  return banks[static_cast<std::size_t>(family)];
}

std::string WaveletSpec::name() const {
  return std::string(family_name(family)) + "|" + std::to_string(level);
}

WaveletSpec WaveletSpec::parse(std::string_view text) {
  const auto sep = text.find_first_of("|:");
  if (sep == std::string_view::npos) {
    throw ArgumentError("wavelet spec '" + std::string(text) + "' must look like haar|1");
  }
  const auto family = parse_family(text.substr(0, sep));
  if (!family) throw ArgumentError("unknown wavelet family in '" + std::string(text) + "'");
  const auto lvl = text.substr(sep + 1);
  int level = 0;
  auto [ptr, ec] = std::from_chars(lvl.data(), lvl.data() + lvl.size(), level);
  if (ec != std::errc() || ptr != lvl.data() + lvl.size() || level < 1) {
    throw ArgumentError("bad wavelet level in '" + std::string(text) + "'");
  }
  return WaveletSpec{*family, level};
}

std::vector<WaveletSpec> default_wavelet_catalog() {
  using F = WaveletFamily;
  const std::array<std::pair<F, int>, kWaveletFamilyCount> top{{
      {F::Haar, 4},
      {F::Db2, 3},
      {F::Db3, 2},
      {F::Coif1, 2},
      {F::Bior1_3, 2},
      {F::Bior2_2, 2},
      {F::Bior3_1, 3},
      {F::Rbio2_2, 2},
      {F::Rbio3_1, 3},
  }};
  std::vector<WaveletSpec> out;
  for (auto [family, levels] : top) {
    for (int l = 1; l <= levels; ++l) out.push_back({family, l});
  }
  return out;
}

int max_level(WaveletFamily family, std::size_t signal_length) {
  const std::size_t span = filter_bank(family).length() - 1;
  int level = 0;
  while ((span << (level + 1)) <= signal_length) ++level;
  return level;
}

std::size_t stage_output_length(WaveletFamily family, std::size_t input_length, Padding padding) {
  if (padding == Padding::Periodization) return input_length / 2;
  return (input_length + filter_bank(family).length() - 1) / 2;
}

StageOutput dwt_step(std::span<const double> signal, WaveletFamily family, Padding padding) {
  require_stage_input(signal.size(), padding);
  const FilterBank& bank = filter_bank(family);
  const auto lo = bank.decomposition_lowpass;
  const auto hi = bank.decomposition_highpass;
  const std::size_t taps = bank.length();
  const std::size_t out_len = stage_output_length(family, signal.size(), padding);

  // Periodized stages are advanced by L/2 - 1 samples, the usual alignment
  // for that mode (it keeps haar unchanged).
  const std::size_t advance = padding == Padding::Periodization ? taps / 2 - 1 : 0;
  StageOutput out{std::vector<double>(out_len, 0.0), std::vector<double>(out_len, 0.0)};
  for (std::size_t o = 0; o < out_len; ++o) {
    double a = 0.0;
    double d = 0.0;
    const auto centre = static_cast<std::ptrdiff_t>(2 * o + 1 + advance);
    for (std::size_t j = 0; j < taps; ++j) {
      const std::ptrdiff_t idx = centre - static_cast<std::ptrdiff_t>(j);
      const double v = padding == Padding::Symmetric ? symmetric_at(signal, idx)
                                                     : signal[wrap(idx, signal.size())];
      a += lo[j] * v;
      d += hi[j] * v;
    }
    out.approx[o] = a;
    out.detail[o] = d;
  }
  return out;
}

std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              WaveletFamily family, std::size_t output_length, Padding padding) {
  if (approx.size() != detail.size()) {
    throw ArgumentError("idwt_step: approximation has " + std::to_string(approx.size()) +
                        " coefficients but detail has " + std::to_string(detail.size()));
  }
  if (stage_output_length(family, output_length, padding) != approx.size() ||
      (padding == Padding::Periodization && output_length % 2 != 0)) {
    throw ArgumentError("idwt_step: " + std::to_string(approx.size()) +
                        " coefficients cannot come from a signal of length " +
                        std::to_string(output_length));
  }
  const FilterBank& bank = filter_bank(family);
  const auto rlo = bank.reconstruction_lowpass;
  const auto rhi = bank.reconstruction_highpass;
  const std::size_t taps = bank.length();
  const std::size_t m = approx.size();
  std::vector<double> out(output_length, 0.0);

  if (padding == Padding::Periodization) {
    // Adjoint of the circular analysis operator with the dual filters.
    for (std::size_t o = 0; o < m; ++o) {
      for (std::size_t j = 0; j < taps; ++j) {
        const std::size_t k = taps - 1 - j;
        const std::size_t idx =
            wrap(static_cast<std::ptrdiff_t>(2 * o + taps / 2) - static_cast<std::ptrdiff_t>(j),
                 output_length);
        out[idx] += rlo[k] * approx[o] + rhi[k] * detail[o];
      }
    }
    return out;
  }

  // Valid part of the upsampled convolution, starting at offset taps - 2.
  const std::size_t offset = taps - 2;
  for (std::size_t pos = 0; pos < output_length; ++pos) {
    const std::size_t full = pos + offset;
    double acc = 0.0;
    // Only even positions of the upsampled sequence are non-zero: full - f = 2c.
    for (std::size_t f = full % 2; f < taps && f <= full; f += 2) {
      const std::size_t c = (full - f) / 2;
      if (c >= m) continue;
      acc += rlo[f] * approx[c] + rhi[f] * detail[c];
    }
    out[pos] = acc;
  }
  return out;
}

Decomposition dwt_full(std::span<const double> signal, const WaveletSpec& spec, Padding padding) {
  require_level(spec, signal.size());
  Decomposition out;
  out.approx.assign(signal.begin(), signal.end());
  for (int l = 0; l < spec.level; ++l) {
    out.input_lengths.push_back(out.approx.size());
    StageOutput stage = dwt_step(out.approx, spec.family, padding);
    out.approx = std::move(stage.approx);
    out.details.push_back(std::move(stage.detail));
  }
  return out;
}

std::vector<double> dwt_approx(std::span<const double> signal, const WaveletSpec& spec,
                               Padding padding) {
  return dwt_full(signal, spec, padding).approx;
}

std::vector<double> idwt(const Decomposition& coeffs, WaveletFamily family, Padding padding) {
  if (coeffs.details.size() != coeffs.input_lengths.size()) {
    throw ArgumentError("idwt: " + std::to_string(coeffs.details.size()) + " detail bands but " +
                        std::to_string(coeffs.input_lengths.size()) + " recorded input lengths");
  }
  std::vector<double> current = coeffs.approx;
  for (std::size_t k = coeffs.details.size(); k-- > 0;) {
    current = idwt_step(current, coeffs.details[k], family, coeffs.input_lengths[k], padding);
  }
  return current;
}

std::vector<double> approximation_signal(std::span<const double> signal, const WaveletSpec& spec,
                                         Padding padding) {
  Decomposition d = dwt_full(signal, spec, padding);
  for (auto& band : d.details) std::fill(band.begin(), band.end(), 0.0);
  return idwt(d, spec.family, padding);
}

}  // namespace dielwave
