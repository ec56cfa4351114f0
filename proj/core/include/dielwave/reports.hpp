#pragma once

#include <iosfwd>
#include <span>

#include "dielwave/ingest.hpp"
#include "dielwave/protocol.hpp"

namespace dielwave {

/// split,iteration,with_wavelets,accuracy,recall,precision,f1 (absent metrics empty).
void write_metrics_csv(std::ostream& out, const ProtocolResult& result);

/// with_wavelets,metric,mean,std,n plus mean_iterations and exhausted_splits rows.
void write_summary_csv(std::ostream& out, const ProtocolResult& result);

/// individual,hour,predicted_state_value,hour_verdict,day_verdict,annotated_label.
/// Uncovered hours have empty value and verdict fields.
void write_detection_states_csv(std::ostream& out, const PreparedDataset& data,
                                std::span<const PredictedStateSeries> states);

/// offset_days,normalized_frequency,std,available_days.
void write_distance_histogram_csv(std::ostream& out, const DetectionSummary& summary);

/// individual_id,date,reason,mean_activity.
void write_exclusions_csv(std::ostream& out, std::span<const Exclusion> exclusions);

/// feature,status,partner,correlation,mean_abs_correlation.
void write_pruning_csv(std::ostream& out, const PruneResult& prune);

}  // namespace dielwave
