#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dielwave/core_model.hpp"
#include "dielwave/feature_matrix.hpp"
#include "dielwave/ingest.hpp"

namespace dielwave {

/// Splits one CSV line; supports double-quoted fields with "" escapes and
/// trims surrounding whitespace of unquoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);
double parse_number(std::string_view text);

/// Records in either layout, picked from the header:
///   individual_id,timestamp_iso8601,resting_min,alleys_min,eating_min
///   individual_id,timestamp_iso8601,activity_level
/// Empty value fields are missing hours.
std::vector<HourlyObservation> read_records_csv(std::istream& in, const std::string& source = "records");
void write_records_csv(std::ostream& out, std::span<const HourlyObservation> records);

/// individual_id,date_iso8601,kind,state_type with kind in {state, event}.
AnnotationCalendar read_annotations_csv(std::istream& in, const std::string& source = "annotations");
void write_annotations_csv(std::ostream& out, const AnnotationCalendar& calendar);

/// Series store: individual_id,timestamp_iso8601,activity_level,label with one
/// row per hour (empty activity_level for missing hours).
void write_series_csv(std::ostream& out, std::span<const LabeledSeries> series);
std::vector<LabeledSeries> read_series_csv(std::istream& in, const std::string& source = "series");

/// Feature matrix with window identity columns:
/// individual_id,window_start,start_hour_of_period,label,<feature...>
void write_feature_matrix_csv(std::ostream& out, std::span<const Window> windows,
                              std::span<const LabeledSeries> series,
                              std::span<const std::size_t> rows, const FeatureMatrix& matrix);

std::vector<HourlyObservation> read_records_file(const std::filesystem::path& path);
AnnotationCalendar read_annotations_file(const std::filesystem::path& path);
std::vector<LabeledSeries> read_series_file(const std::filesystem::path& path);

/// Opens `path` for writing (creating parent directories) or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dielwave
