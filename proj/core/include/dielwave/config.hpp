#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dielwave/core_model.hpp"
#include "dielwave/ingest.hpp"
#include "dielwave/protocol.hpp"
#include "dielwave/synth.hpp"

namespace dielwave {

struct RunPaths {
  std::string records;
  std::string annotations;
  std::string series;  // series store written by ingest, read by later stages
  std::string output_dir = "out";
  friend bool operator==(const RunPaths&, const RunPaths&) = default;
};

/// Everything a CLI command needs. Defaults follow the reference protocol:
/// 24-hour windows and period, 0.9 pruning threshold, 100 trees, 70 splits,
/// up to 20 iterations, 0.001 stabilization over 5 iterations, theta 0,
/// 12-hour day quorum.
struct RunConfig {
  RunPaths paths;
  PeriodConfig period;
  int step = 1;
  IngestOptions ingest;
  ProtocolConfig protocol;
  DetectionConfig detection;
  AttributionConfig attribution;
  SynthParams synth;
  int detect_split = 0;  // split whose verdicts feed detection_states.csv

  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// `key = value` lines; `#` starts a comment. Unknown keys and malformed
/// values throw ConfigError naming the line. Keys not present keep their
/// defaults, except that the first `fuzzy.<State>` key replaces the whole
/// default fuzzy policy.
RunConfig parse_config(std::string_view text);

/// Applies one `key=value` override on top of an existing config.
void apply_config_override(RunConfig& config, std::string_view assignment);

/// Every key, in a stable order; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

std::vector<std::string> config_keys();

}  // namespace dielwave
