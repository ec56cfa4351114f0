// dielwave: command-line front end (synth, ingest, features, run, attr, detect-days).

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dielwave/config.hpp"
#include "dielwave/csv.hpp"
#include "dielwave/errors.hpp"
#include "dielwave/ingest.hpp"
#include "dielwave/protocol.hpp"
#include "dielwave/reports.hpp"
#include "dielwave/synth.hpp"

namespace fs = std::filesystem;
using namespace dielwave;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> records;
  std::optional<std::string> annotations;
  std::optional<std::string> series;
  std::optional<bool> with_wavelets;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool wavelet_flag) {
  cmd->add_option("--config", o.config_path, "Configuration file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a configuration key, e.g. --set forest.n_trees=50");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--records", o.records, "Hourly records CSV");
  cmd->add_option("--annotations", o.annotations, "Annotation calendar CSV");
  cmd->add_option("--series", o.series, "Series store CSV written by `ingest`");
  if (wavelet_flag) {
    cmd->add_flag("--with-wavelets{true},--no-wavelets{false}", o.with_wavelets,
                  "Restrict to the condition with or without wavelet features");
  }
}

RunConfig load_config(const CommonOptions& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = parse_config(read_text_file(o.config_path));
  for (const auto& kv : o.overrides) apply_config_override(cfg, kv);
  if (o.seed) cfg.protocol.base_seed = cfg.synth.seed = *o.seed;
  if (o.jobs) cfg.protocol.jobs = *o.jobs;
  if (o.out) cfg.paths.output_dir = *o.out;
  if (o.records) cfg.paths.records = *o.records;
  if (o.annotations) cfg.paths.annotations = *o.annotations;
  if (o.series) cfg.paths.series = *o.series;
  if (o.with_wavelets) {
    cfg.protocol.with_wavelets = {*o.with_wavelets};
    cfg.attribution.with_wavelets = *o.with_wavelets;
  }
  cfg.validate();
  return cfg;
}

fs::path out_file(const RunConfig& cfg, const std::string& name) {
  return fs::path(cfg.paths.output_dir) / name;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  auto out = open_output(path);
  writer(out);
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  std::cout << "wrote " << path.string() << '\n';
}

IngestResult ingest_from_config(const RunConfig& cfg) {
  if (cfg.paths.records.empty()) throw ConfigError("no records file (use --records or paths.records)");
  const auto records = read_records_file(cfg.paths.records);
  const AnnotationCalendar calendar =
      cfg.paths.annotations.empty() ? AnnotationCalendar{} : read_annotations_file(cfg.paths.annotations);
  return ingest(records, calendar, cfg.ingest);
}

std::vector<LabeledSeries> load_series(const RunConfig& cfg) {
  if (!cfg.paths.series.empty()) return read_series_file(cfg.paths.series);
  return ingest_from_config(cfg).series;
}

PreparedDataset prepare(const RunConfig& cfg) {
  auto series = load_series(cfg);
  if (series.empty()) throw ConfigError("the dataset holds no series");
  return prepare_dataset(std::move(series), cfg.period, cfg.step, cfg.protocol.features,
                         cfg.protocol.jobs);
}

std::string pm(const MetricSummary& m) {
  if (!m.mean) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f +/- %.3f", *m.mean, m.std.value_or(0.0));
  return buf;
}

void print_summary(const ProtocolResult& result) {
  for (const auto& s : result.summaries) {
    std::cout << (s.with_wavelets ? "with wavelets   " : "without wavelets") << "  accuracy "
              << pm(s.accuracy) << "  recall " << pm(s.recall) << "  precision " << pm(s.precision)
              << "  f1 " << pm(s.f1) << "  (mean iterations " << s.mean_iterations << ")\n";
    if (s.exhausted_splits > 0) {
      std::cerr << "warning: " << s.exhausted_splits
                << " split(s) ran out of normal windows before balancing the test set\n";
    }
  }
}

void write_detection(const RunConfig& cfg, const PreparedDataset& data, const ProtocolResult& result) {
  const bool primary = cfg.protocol.with_wavelets.front();
  const auto runs = result.runs_for(primary);
  const auto summary = analyze_detections(data, runs, cfg.detection);
  const auto split = static_cast<std::size_t>(cfg.detect_split);
  if (split >= runs.size()) throw ConfigError("detection.split is out of range");
  const auto states = predicted_states_for(data, runs[split]->window_verdicts, cfg.detection);
  write_file(out_file(cfg, "detection_states.csv"),
             [&](std::ostream& o) { write_detection_states_csv(o, data, states); });
  write_file(out_file(cfg, "distance_histogram.csv"),
             [&](std::ostream& o) { write_distance_histogram_csv(o, summary); });
  std::cout << "detected abnormal days " << summary.detections << " (unmatched " << summary.unmatched
            << ")";
  if (summary.in_range_mean) {
    char buf[128];
    std::snprintf(buf, sizeof buf, ", share within [%d, %+d] days: %.3f +/- %.3f", cfg.detection.range_lo,
                  cfg.detection.range_hi, *summary.in_range_mean, summary.in_range_std.value_or(0.0));
    std::cout << buf;
  }
  std::cout << '\n';
}

void write_attribution(const RunConfig& cfg, const PreparedDataset& data) {
  const auto result = run_attribution(data, cfg.protocol, cfg.attribution);
  write_file(out_file(cfg, "attribution.json"), [&](std::ostream& o) { o << result.to_json() << '\n'; });
}

void cmd_synth(const RunConfig& cfg) {
  const SynthData data = synthesize(cfg.synth);
  write_file(out_file(cfg, "records.csv"), [&](std::ostream& o) { write_records_csv(o, data.records); });
  write_file(out_file(cfg, "annotations.csv"),
             [&](std::ostream& o) { write_annotations_csv(o, data.annotations); });
}

void cmd_ingest(const RunConfig& cfg) {
  const IngestResult r = ingest_from_config(cfg);
  write_file(out_file(cfg, "series.csv"), [&](std::ostream& o) { write_series_csv(o, r.series); });
  write_file(out_file(cfg, "exclusions.csv"), [&](std::ostream& o) { write_exclusions_csv(o, r.exclusions); });
  std::cout << r.series.size() << " series, " << r.exclusions.size() << " excluded days\n";
}

void cmd_features(const RunConfig& cfg, int split_index) {
  const PreparedDataset data = prepare(cfg);
  const Split split = build_train_test(data.sets, split_seed(cfg.protocol.base_seed, split_index), data.step);
  if (split.normals_exhausted) std::cerr << "warning: normal windows exhausted while balancing the test set\n";
  const bool with = cfg.protocol.with_wavelets.front();
  const SplitFeatures feats = split_features(data, split, with, cfg.protocol.features);
  std::vector<std::size_t> rows(data.sets.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  write_file(out_file(cfg, "features.csv"), [&](std::ostream& o) {
    write_feature_matrix_csv(o, data.sets.windows, data.series, rows, feats.matrix);
  });
  write_file(out_file(cfg, "pruning.csv"), [&](std::ostream& o) { write_pruning_csv(o, feats.prune); });
  write_file(out_file(cfg, "split.csv"), [&](std::ostream& o) {
    o << "individual_id,window_start,set\n";
    auto emit = [&](const std::vector<std::size_t>& idx, const char* set) {
      for (std::size_t i : idx) {
        const Window& w = data.sets.windows[i];
        o << w.individual_id << ','
          << format_timestamp(data.series[w.series_index].time_at(static_cast<std::size_t>(w.start_index)))
          << ',' << set << '\n';
      }
    };
    emit(split.train, "train");
    emit(split.test, "test");
  });
  ForestParams params = cfg.protocol.forest;
  params.seed = forest_seed(split.seed, 0, cfg.protocol.reseed_each_iteration);
  params.jobs = cfg.protocol.jobs;
  const ForestModel model = fit(feats.matrix.select_rows(split.train), params);
  write_file(out_file(cfg, "model.json"), [&](std::ostream& o) { o << model.to_json() << '\n'; });
  std::cout << feats.candidates.size() << " candidate features, " << feats.matrix.cols()
            << " retained; " << split.train.size() << " training and " << split.test.size()
            << " testing windows\n";
}

void cmd_run(RunConfig cfg, bool with_attribution) {
  const PreparedDataset data = prepare(cfg);
  const ProtocolResult result = run_protocol(data, cfg.protocol);
  write_file(out_file(cfg, "metrics.csv"), [&](std::ostream& o) { write_metrics_csv(o, result); });
  write_file(out_file(cfg, "summary.csv"), [&](std::ostream& o) { write_summary_csv(o, result); });
  print_summary(result);
  if (cfg.protocol.keep_verdicts) write_detection(cfg, data, result);
  if (with_attribution) write_attribution(cfg, data);
}

void cmd_attr(const RunConfig& cfg) { write_attribution(cfg, prepare(cfg)); }

void cmd_detect_days(RunConfig cfg) {
  cfg.protocol.with_wavelets.resize(1);
  cfg.protocol.keep_verdicts = true;
  const PreparedDataset data = prepare(cfg);
  const ProtocolResult result = run_protocol(data, cfg.protocol);
  print_summary(result);
  write_detection(cfg, data, result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-feature anomaly detection for periodic hourly series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dielwave 0.1.0");

  CommonOptions synth_o, ingest_o, features_o, run_o, attr_o, detect_o;
  auto* synth = app.add_subcommand("synth", "Generate synthetic records and annotations");
  add_common(synth, synth_o, false);
  auto* ing = app.add_subcommand("ingest", "Build the labeled series store from records and annotations");
  add_common(ing, ingest_o, false);
  auto* feat = app.add_subcommand("features", "Feature matrix, pruning log and model for one split");
  add_common(feat, features_o, true);
  int split_index = 0;
  feat->add_option("--split", split_index, "Split index")->check(CLI::NonNegativeNumber);
  auto* run = app.add_subcommand("run", "Full protocol: metrics and detection artifacts");
  add_common(run, run_o, true);
  bool run_attr = false;
  run->add_flag("--attribution", run_attr, "Also write attribution.json");
  auto* attr = app.add_subcommand("attr", "Shapley attribution ranks and critical difference");
  add_common(attr, attr_o, true);
  auto* detect = app.add_subcommand("detect-days", "Per-hour predicted states and distance of detection");
  add_common(detect, detect_o, true);
  auto* show = app.add_subcommand("config", "Print the effective configuration");
  CommonOptions show_o;
  add_common(show, show_o, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) cmd_synth(load_config(synth_o));
    if (ing->parsed()) cmd_ingest(load_config(ingest_o));
    if (feat->parsed()) cmd_features(load_config(features_o), split_index);
    if (run->parsed()) cmd_run(load_config(run_o), run_attr);
    if (attr->parsed()) cmd_attr(load_config(attr_o));
    if (detect->parsed()) cmd_detect_days(load_config(detect_o));
    if (show->parsed()) std::cout << emit_config(load_config(show_o));
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
