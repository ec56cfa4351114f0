#include "dielwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "dielwave/csv.hpp"
#include "dielwave/errors.hpp"

namespace dielwave {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.emplace_back(trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view s) {
  s = trim(s);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s) {
  try {
    return parse_number(s);
  } catch (const ArgumentError&) {
    throw ConfigError("not a number: '" + std::string(s) + "'");
  }
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

template <typename E>
struct EnumNames {
  std::vector<std::pair<E, std::string>> entries;

  std::string name(E e) const {
    for (const auto& [v, n] : entries) {
      if (v == e) return n;
    }
    return "?";
  }
  E parse(std::string_view s) const {
    s = trim(s);
    std::string options;
    for (const auto& [v, n] : entries) {
      if (n == s) return v;
      options += (options.empty() ? "" : ", ") + n;
    }
    throw ConfigError("expected one of {" + options + "}, got '" + std::string(s) + "'");
  }
};

const EnumNames<WaveletOutput> kOutputs{{{WaveletOutput::Coefficients, "coefficients"},
                                         {WaveletOutput::Reconstruction, "reconstruction"}}};
const EnumNames<Padding> kPaddings{{{Padding::Symmetric, "symmetric"},
                                    {Padding::Periodization, "periodization"}}};
const EnumNames<AutocorrEstimator> kAutocorr{{{AutocorrEstimator::Pearson, "pearson"},
                                              {AutocorrEstimator::Circular, "circular"}}};
const EnumNames<TieRule> kTies{{{TieRule::Earlier, "earlier"}, {TieRule::Later, "later"}}};

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

// `ref` maps a config to the member it edits.
template <typename Ref>
Field int_field(std::string key, Ref ref) {
  return {std::move(key),
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view v) {
            auto& m = ref(c);
            m = parse_int<std::remove_reference_t<decltype(m)>>(v);
          }};
}

template <typename Ref>
Field double_field(std::string key, Ref ref) {
  return {std::move(key),
          [ref](const RunConfig& c) { return format_number(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view v) { ref(c) = parse_double(v); }};
}

template <typename Ref>
Field bool_field(std::string key, Ref ref) {
  return {std::move(key),
          [ref](const RunConfig& c) -> std::string {
            return ref(const_cast<RunConfig&>(c)) ? "true" : "false";
          },
          [ref](RunConfig& c, std::string_view v) { ref(c) = parse_bool(v); }};
}

template <typename Ref>
Field string_field(std::string key, Ref ref) {
  return {std::move(key), [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); },
          [ref](RunConfig& c, std::string_view v) { ref(c) = std::string(trim(v)); }};
}

template <typename E, typename Ref>
Field enum_field(std::string key, const EnumNames<E>& names, Ref ref) {
  return {std::move(key),
          [ref, &names](const RunConfig& c) { return names.name(ref(const_cast<RunConfig&>(c))); },
          [ref, &names](RunConfig& c, std::string_view v) { ref(c) = names.parse(v); }};
}

#define DW_REF(member) [](RunConfig& c) -> auto& { return c.member; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(string_field("paths.records", DW_REF(paths.records)));
    f.push_back(string_field("paths.annotations", DW_REF(paths.annotations)));
    f.push_back(string_field("paths.series", DW_REF(paths.series)));
    f.push_back(string_field("paths.output_dir", DW_REF(paths.output_dir)));
    f.push_back(int_field("period.length", DW_REF(period.period_length)));
    f.push_back(int_field("period.window_size", DW_REF(period.window_size)));
    f.push_back(int_field("windowing.step", DW_REF(step)));
    f.push_back(double_field("ingest.al_cutoff", DW_REF(ingest.al_cutoff)));
    f.push_back({"features.wavelets",
                 [](const RunConfig& c) {
                   std::vector<std::string> names;
                   for (const auto& s : c.protocol.features.specs) names.push_back(s.name());
                   return join(names);
                 },
                 [](RunConfig& c, std::string_view v) {
                   std::vector<WaveletSpec> specs;
                   for (const auto& item : split_list(v)) {
                     try {
                       specs.push_back(WaveletSpec::parse(item));
                     } catch (const ArgumentError& e) {
                       throw ConfigError(e.what());
                     }
                   }
                   c.protocol.features.specs = std::move(specs);
                 }});
    f.push_back(enum_field("features.output", kOutputs, DW_REF(protocol.features.wavelet.output)));
    f.push_back(enum_field("features.padding", kPaddings, DW_REF(protocol.features.wavelet.padding)));
    f.push_back(enum_field("features.autocorr", kAutocorr, DW_REF(protocol.features.statistics.autocorr)));
    f.push_back(bool_field("features.prune", DW_REF(protocol.features.prune)));
    f.push_back(double_field("features.prune_threshold", DW_REF(protocol.features.prune_threshold)));
    f.push_back(int_field("forest.n_trees", DW_REF(protocol.forest.n_trees)));
    f.push_back(double_field("forest.subsample_fraction", DW_REF(protocol.forest.subsample_fraction)));
    f.push_back(double_field("forest.threshold_quantile", DW_REF(protocol.forest.threshold_quantile)));
    f.push_back(int_field("protocol.n_splits", DW_REF(protocol.protocol.n_splits)));
    f.push_back(int_field("protocol.max_iterations", DW_REF(protocol.protocol.max_iterations)));
    f.push_back(double_field("protocol.stabilization_epsilon", DW_REF(protocol.protocol.stabilization_epsilon)));
    f.push_back(int_field("protocol.stabilization_window", DW_REF(protocol.protocol.stabilization_window)));
    f.push_back(bool_field("protocol.reseed_each_iteration", DW_REF(protocol.reseed_each_iteration)));
    f.push_back({"protocol.conditions",
                 [](const RunConfig& c) {
                   std::vector<std::string> names;
                   for (bool w : c.protocol.with_wavelets) names.push_back(w ? "with" : "without");
                   return join(names);
                 },
                 [](RunConfig& c, std::string_view v) {
                   std::vector<bool> conds;
                   for (const auto& item : split_list(v)) {
                     if (item == "with") {
                       conds.push_back(true);
                     } else if (item == "without") {
                       conds.push_back(false);
                     } else {
                       throw ConfigError("condition must be 'with' or 'without', got '" + item + "'");
                     }
                   }
                   c.protocol.with_wavelets = std::move(conds);
                 }});
    f.push_back(bool_field("protocol.keep_verdicts", DW_REF(protocol.keep_verdicts)));
    f.push_back(int_field("seed", DW_REF(protocol.base_seed)));
    f.push_back(int_field("jobs", DW_REF(protocol.jobs)));
    f.push_back(double_field("detection.theta", DW_REF(detection.theta)));
    f.push_back(int_field("detection.quorum", DW_REF(detection.quorum)));
    f.push_back(enum_field("detection.tie", kTies, DW_REF(detection.tie)));
    f.push_back(int_field("detection.range_lo", DW_REF(detection.range_lo)));
    f.push_back(int_field("detection.range_hi", DW_REF(detection.range_hi)));
    f.push_back(int_field("detection.split", DW_REF(detect_split)));
    f.push_back(int_field("attribution.n_splits", DW_REF(attribution.n_splits)));
    f.push_back(int_field("attribution.iterations", DW_REF(attribution.iterations)));
    f.push_back(int_field("attribution.windows_per_run", DW_REF(attribution.windows_per_run)));
    f.push_back(int_field("attribution.background_rows", DW_REF(attribution.background_rows)));
    f.push_back(int_field("attribution.permutations", DW_REF(attribution.permutations)));
    f.push_back(double_field("attribution.alpha", DW_REF(attribution.alpha)));
    f.push_back(bool_field("attribution.rank_by_signed", DW_REF(attribution.rank_by_signed)));
    f.push_back(bool_field("attribution.with_wavelets", DW_REF(attribution.with_wavelets)));
    f.push_back(int_field("synth.individuals", DW_REF(synth.individuals)));
    f.push_back(int_field("synth.days", DW_REF(synth.days)));
    f.push_back({"synth.start_date", [](const RunConfig& c) { return format_date(c.synth.start_date); },
                 [](RunConfig& c, std::string_view v) {
                   try {
                     c.synth.start_date = parse_date(trim(v));
                   } catch (const ArgumentError& e) {
                     throw ConfigError(e.what());
                   }
                 }});
    f.push_back(double_field("synth.base_level", DW_REF(synth.base_level)));
    f.push_back(double_field("synth.amplitude", DW_REF(synth.amplitude)));
    f.push_back(double_field("synth.second_amplitude", DW_REF(synth.second_amplitude)));
    f.push_back(double_field("synth.peak_hour", DW_REF(synth.peak_hour)));
    f.push_back(double_field("synth.individual_offset_sd", DW_REF(synth.individual_offset_sd)));
    f.push_back(double_field("synth.noise", DW_REF(synth.noise)));
    f.push_back(double_field("synth.missing_rate", DW_REF(synth.missing_rate)));
    f.push_back(double_field("synth.missing_gap_hours", DW_REF(synth.missing_gap_hours)));
    f.push_back(double_field("synth.anomaly_rate", DW_REF(synth.anomaly_rate)));
    f.push_back(double_field("synth.anomaly_shift_hours", DW_REF(synth.anomaly_shift_hours)));
    f.push_back(double_field("synth.anomaly_damping", DW_REF(synth.anomaly_damping)));
    f.push_back(double_field("synth.anomaly_level_shift", DW_REF(synth.anomaly_level_shift)));
    f.push_back(int_field("synth.precursor_days", DW_REF(synth.precursor_days)));
    f.push_back({"synth.state_types", [](const RunConfig& c) { return join(c.synth.state_types); },
                 [](RunConfig& c, std::string_view v) { c.synth.state_types = split_list(v); }});
    f.push_back(double_field("synth.event_rate", DW_REF(synth.event_rate)));
    f.push_back(double_field("synth.sensor_fault_rate", DW_REF(synth.sensor_fault_rate)));
    f.push_back(int_field("synth.seed", DW_REF(synth.seed)));
    return f;
  }();
  return table;
}

#undef DW_REF

constexpr std::string_view kFuzzyPrefix = "fuzzy.";

FuzzyWindow parse_fuzzy(std::string_view v) {
  const auto parts = split_list(v);
  if (parts.size() != 2) throw ConfigError("fuzzy window must be 'days_before,days_after'");
  FuzzyWindow w{parse_int<int>(parts[0]), parse_int<int>(parts[1])};
  if (w.days_before < 0 || w.days_after < 0) throw ConfigError("fuzzy days must be >= 0");
  return w;
}

// Applies one key; `fuzzy_seen` tracks whether the default policy was replaced.
void apply(RunConfig& c, std::string_view key, std::string_view value, bool& fuzzy_seen) {
  if (key.starts_with(kFuzzyPrefix)) {
    const std::string state(key.substr(kFuzzyPrefix.size()));
    if (state.empty()) throw ConfigError("empty state name in fuzzy key");
    if (!fuzzy_seen) {
      c.ingest.policy.windows.clear();
      fuzzy_seen = true;
    }
    c.ingest.policy.windows[state] = parse_fuzzy(value);
    return;
  }
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(c, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
  return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace

void RunConfig::validate() const {
  try {
    period.validate();
    protocol.protocol.validate();
    protocol.forest.validate();
    synth.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (step < 1) throw ConfigError("windowing.step must be >= 1");
  if (protocol.features.prune_threshold <= 0.0 || protocol.features.prune_threshold > 1.0) {
    throw ConfigError("features.prune_threshold must be in (0, 1]");
  }
  if (detection.theta < -1.0 || detection.theta > 1.0) throw ConfigError("detection.theta must be in [-1, 1]");
  if (detection.quorum < 1 || detection.quorum > 24) throw ConfigError("detection.quorum must be in [1, 24]");
  if (detection.range_lo > detection.range_hi) throw ConfigError("detection.range_lo exceeds range_hi");
  if (attribution.alpha != 0.05 && attribution.alpha != 0.10) {
    throw ConfigError("attribution.alpha must be 0.05 or 0.1");
  }
  if (protocol.with_wavelets.empty()) throw ConfigError("protocol.conditions must not be empty");
  const auto q = static_cast<std::size_t>(period.window_size);
  for (const auto& s : protocol.features.specs) {
    if (s.level < 1 || s.level > max_level(s.family, q)) {
      throw ConfigError("features.wavelets: " + s.name() + " exceeds the maximum level for " +
                        std::to_string(q) + "-hour windows");
    }
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  bool fuzzy_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      const auto [key, value] = split_assignment(line);
      apply(c, key, value, fuzzy_seen);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

void apply_config_override(RunConfig& config, std::string_view assignment) {
  const auto [key, value] = split_assignment(assignment);
  // An override of one fuzzy state edits the current policy instead of replacing it.
  bool fuzzy_seen = true;
  apply(config, key, value, fuzzy_seen);
}

std::string emit_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = dot == std::string::npos ? "" : f.key.substr(0, dot);
    if (s != section && !section.empty()) out << '\n';
    section = s;
    out << f.key << " = " << f.get(config) << '\n';
  }
  out << "\n# the first fuzzy.* key replaces the whole default policy\n";
  for (const auto& [state, w] : config.ingest.policy.windows) {
    out << kFuzzyPrefix << state << " = " << w.days_before << ',' << w.days_after << '\n';
  }
  return out.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace dielwave
