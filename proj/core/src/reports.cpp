#include "dielwave/reports.hpp"

#include <algorithm>
#include <ostream>

#include "dielwave/csv.hpp"

namespace dielwave {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string_view condition_name(bool with_wavelets) { return with_wavelets ? "true" : "false"; }

}  // namespace

void write_metrics_csv(std::ostream& out, const ProtocolResult& result) {
  out << "split,iteration,with_wavelets,accuracy,recall,precision,f1\n";
  for (const auto& run : result.runs) {
    for (const auto& it : run.iterations) {
      out << run.split << ',' << it.iteration << ',' << condition_name(run.with_wavelets) << ','
          << opt(it.metrics.accuracy) << ',' << opt(it.metrics.recall) << ','
          << opt(it.metrics.precision) << ',' << opt(it.metrics.f1) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const ProtocolResult& result) {
  out << "with_wavelets,metric,mean,std,n\n";
  for (const auto& s : result.summaries) {
    const auto row = [&](std::string_view name, const MetricSummary& m) {
      out << condition_name(s.with_wavelets) << ',' << name << ',' << opt(m.mean) << ','
          << opt(m.std) << ',' << m.n << '\n';
    };
    row("accuracy", s.accuracy);
    row("recall", s.recall);
    row("precision", s.precision);
    row("f1", s.f1);
    const auto n_runs = result.runs_for(s.with_wavelets).size();
    out << condition_name(s.with_wavelets) << ",mean_iterations," << format_number(s.mean_iterations)
        << ",," << n_runs << '\n';
    out << condition_name(s.with_wavelets) << ",exhausted_splits," << s.exhausted_splits << ",,"
        << n_runs << '\n';
  }
}

void write_detection_states_csv(std::ostream& out, const PreparedDataset& data,
                                std::span<const PredictedStateSeries> states) {
  out << "individual,hour,predicted_state_value,hour_verdict,day_verdict,annotated_label\n";
  for (std::size_t s = 0; s < states.size() && s < data.series.size(); ++s) {
    const auto& series = data.series[s];
    const auto& st = states[s];
    for (std::size_t h = 0; h < series.size(); ++h) {
      const HourStamp t = series.time_at(h);
      out << series.individual_id() << ',' << format_timestamp(t) << ',' << opt(st.values[h]) << ',';
      if (st.hour_verdicts[h]) out << verdict_name(*st.hour_verdicts[h]);
      out << ',';
      if (const auto dv = st.day_verdict(day_of(t))) out << verdict_name(*dv);
      out << ',' << label_code(series.labels()[h]) << '\n';
    }
  }
}

void write_distance_histogram_csv(std::ostream& out, const DetectionSummary& summary) {
  out << "offset_days,normalized_frequency,std,available_days\n";
  for (const auto& [offset, value] : summary.histogram_mean) {
    const auto sd = summary.histogram_std.find(offset);
    out << offset << ',' << format_number(value) << ','
        << (sd == summary.histogram_std.end() ? std::string() : format_number(sd->second)) << ','
        << summary.availability.at(offset) << '\n';
  }
}

void write_exclusions_csv(std::ostream& out, std::span<const Exclusion> exclusions) {
  out << "individual_id,date,reason,mean_activity\n";
  for (const auto& e : exclusions) {
    out << e.individual_id << ',' << format_date(e.day) << ',' << exclusion_reason_name(e.reason)
        << ',' << opt(e.mean_activity) << '\n';
  }
}

void write_pruning_csv(std::ostream& out, const PruneResult& prune) {
  out << "feature,status,partner,correlation,mean_abs_correlation\n";
  for (const auto& f : prune.retained) {
    const bool constant = std::find(prune.constant.begin(), prune.constant.end(), f) != prune.constant.end();
    out << f << ',' << (constant ? "retained_constant" : "retained") << ",,,\n";
  }
  for (const auto& r : prune.removed) {
    out << r.feature << ",removed," << r.partner << ',' << format_number(r.correlation) << ','
        << format_number(r.mean_abs_correlation) << '\n';
  }
}

}  // namespace dielwave
