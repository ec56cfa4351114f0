#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dielwave {

enum class WaveletFamily {
  Haar,
  Db2,
  Db3,
  Coif1,
  Bior1_3,
  Bior2_2,
  Bior3_1,
  Rbio2_2,
  Rbio3_1,
};

inline constexpr std::size_t kWaveletFamilyCount = 9;

std::string_view family_name(WaveletFamily family);  // "haar", "db2", "bior1.3", ...
std::optional<WaveletFamily> parse_family(std::string_view name);
std::span<const WaveletFamily> all_families();

/// Analysis/synthesis filter quadruple. All four filters have the same
/// (even) length; shorter biorthogonal duals are zero padded so that the
/// taps stay aligned.
struct FilterBank {
  std::span<const double> decomposition_lowpass;
  std::span<const double> decomposition_highpass;
  std::span<const double> reconstruction_lowpass;
  std::span<const double> reconstruction_highpass;
  bool orthogonal = false;

  std::size_t length() const { return decomposition_lowpass.size(); }
};

const FilterBank& filter_bank(WaveletFamily family);

/// Boundary extension used by each analysis stage.
///  - Symmetric: half-sample mirror (x[-1] = x[0]); stage output length is
///    floor((n + L - 1) / 2).
///  - Periodization: circular wrap; stage output length n / 2 and n must be
///    even. Orthogonal families are then exactly energy preserving.
enum class Padding { Symmetric, Periodization };

struct WaveletSpec {
  WaveletFamily family = WaveletFamily::Haar;
  int level = 1;

  /// Feature name in the `family|level` form, e.g. "haar|1".
  std::string name() const;
  /// Accepts `family|level` or `family:level`.
  static WaveletSpec parse(std::string_view text);

  friend auto operator<=>(const WaveletSpec&, const WaveletSpec&) = default;
};

/// The 23 (family, level) pairs used for 24-hour windows.
std::vector<WaveletSpec> default_wavelet_catalog();

/// floor(log2(n / (L - 1))) clamped at zero, L the filter length (2 for haar).
int max_level(WaveletFamily family, std::size_t signal_length);

/// Coefficient count produced by one analysis stage on `input_length` samples.
std::size_t stage_output_length(WaveletFamily family, std::size_t input_length,
                                Padding padding = Padding::Symmetric);

struct StageOutput {
  std::vector<double> approx;
  std::vector<double> detail;
};

StageOutput dwt_step(std::span<const double> signal, WaveletFamily family,
                     Padding padding = Padding::Symmetric);

/// Inverse of one stage. `output_length` is the length of the signal that was
/// analysed (needed because odd lengths are ambiguous).
std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              WaveletFamily family, std::size_t output_length,
                              Padding padding = Padding::Symmetric);

/// Approximation coefficients after `spec.level` cascaded lowpass stages.
/// Throws ArgumentError when the level exceeds max_level for this length.
std::vector<double> dwt_approx(std::span<const double> signal, const WaveletSpec& spec,
                               Padding padding = Padding::Symmetric);

/// Full multi-level decomposition. `details[k]` holds the stage k+1 detail
/// coefficients (finest first) and `input_lengths[k]` the length of the
/// signal entering stage k+1.
struct Decomposition {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;
  std::vector<std::size_t> input_lengths;

  int level() const { return static_cast<int>(details.size()); }
};

Decomposition dwt_full(std::span<const double> signal, const WaveletSpec& spec,
                       Padding padding = Padding::Symmetric);

/// Multi-level synthesis. Throws ArgumentError if the coefficient lengths
/// cannot come from analysing signals of the recorded input lengths.
std::vector<double> idwt(const Decomposition& coeffs, WaveletFamily family,
                         Padding padding = Padding::Symmetric);

/// Smoothed signal of the original length: synthesis with every detail band
/// zeroed.
std::vector<double> approximation_signal(std::span<const double> signal, const WaveletSpec& spec,
                                         Padding padding = Padding::Symmetric);

}  // namespace dielwave
