#include "dielwave/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dielwave/errors.hpp"

namespace dielwave {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Reads non-empty lines, tracking the 1-based line number for messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (trim(line).empty()) continue;
      fields = split_csv_line(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  template <typename Fn>
  auto guarded(Fn&& fn) const {
    try {
      return fn();
    } catch (const ArgumentError& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx[lower(header[i])] = i;
  return idx;
}

std::optional<double> optional_number(const std::string& field) {
  if (trim(field).empty()) return std::nullopt;
  return parse_number(field);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
  const auto t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ArgumentError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<HourlyObservation> read_records_csv(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<std::string> fields;
  if (!reader.next(fields)) return {};
  const auto idx = header_index(fields);
  const auto has = [&](const char* name) { return idx.contains(name); };
  if (!has("individual_id") || !has("timestamp_iso8601")) {
    reader.fail("header must start with individual_id,timestamp_iso8601");
  }
  const bool durations = has("resting_min") && has("alleys_min") && has("eating_min");
  if (!durations && !has("activity_level")) {
    reader.fail("header needs either activity_level or resting_min,alleys_min,eating_min");
  }
  const std::size_t width = fields.size();
  const std::size_t id_col = idx.at("individual_id");
  const std::size_t ts_col = idx.at("timestamp_iso8601");

  std::vector<HourlyObservation> out;
  while (reader.next(fields)) {
    if (fields.size() != width) {
      reader.fail("expected " + std::to_string(width) + " fields, got " +
                  std::to_string(fields.size()));
    }
    HourlyObservation obs;
    obs.individual_id = fields[id_col];
    obs.timestamp = reader.guarded([&] { return parse_timestamp(fields[ts_col]); });
    obs.activity_level = reader.guarded([&]() -> std::optional<double> {
      if (!durations) return optional_number(fields[idx.at("activity_level")]);
      const auto r = optional_number(fields[idx.at("resting_min")]);
      const auto a = optional_number(fields[idx.at("alleys_min")]);
      const auto e = optional_number(fields[idx.at("eating_min")]);
      if (!r || !a || !e) return std::nullopt;
      return activity_level(*r, *a, *e);
    });
    out.push_back(std::move(obs));
  }
  return out;
}

void write_records_csv(std::ostream& out, std::span<const HourlyObservation> records) {
  out << "individual_id,timestamp_iso8601,activity_level\n";
  for (const auto& r : records) {
    out << quote_if_needed(r.individual_id) << ',' << format_timestamp(r.timestamp) << ',';
    if (r.activity_level) out << format_number(*r.activity_level);
    out << '\n';
  }
}

AnnotationCalendar read_annotations_csv(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<std::string> fields;
  AnnotationCalendar cal;
  if (!reader.next(fields)) return cal;
  const auto idx = header_index(fields);
  for (const char* col : {"individual_id", "date_iso8601", "kind", "state_type"}) {
    if (!idx.contains(col)) reader.fail(std::string("missing column ") + col);
  }
  const std::size_t width = fields.size();
  while (reader.next(fields)) {
    if (fields.size() != width) {
      reader.fail("expected " + std::to_string(width) + " fields, got " +
                  std::to_string(fields.size()));
    }
    Annotation a;
    a.individual_id = fields[idx.at("individual_id")];
    a.date = reader.guarded([&] { return parse_date(fields[idx.at("date_iso8601")]); });
    const std::string kind = lower(fields[idx.at("kind")]);
    if (kind == "state") {
      a.kind = AnnotationKind::State;
    } else if (kind == "event") {
      a.kind = AnnotationKind::Event;
    } else {
      reader.fail("kind must be 'state' or 'event', got '" + fields[idx.at("kind")] + "'");
    }
    a.state_type = fields[idx.at("state_type")];
    if (a.kind == AnnotationKind::State && a.state_type.empty()) {
      reader.fail("state annotation without state_type");
    }
    cal.entries.push_back(std::move(a));
  }
  return cal;
}

void write_annotations_csv(std::ostream& out, const AnnotationCalendar& calendar) {
  out << "individual_id,date_iso8601,kind,state_type\n";
  for (const auto& a : calendar.entries) {
    out << quote_if_needed(a.individual_id) << ',' << format_date(a.date) << ','
        << (a.kind == AnnotationKind::State ? "state" : "event") << ','
        << quote_if_needed(a.state_type) << '\n';
  }
}

void write_series_csv(std::ostream& out, std::span<const LabeledSeries> series) {
  out << "individual_id,timestamp_iso8601,activity_level,label\n";
  for (const auto& s : series) {
    const std::string id = quote_if_needed(s.individual_id());
    for (std::size_t h = 0; h < s.size(); ++h) {
      out << id << ',' << format_timestamp(s.time_at(h)) << ',';
      if (s.values()[h]) out << format_number(*s.values()[h]);
      out << ',' << label_code(s.labels()[h]) << '\n';
    }
  }
}

std::vector<LabeledSeries> read_series_csv(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<std::string> fields;
  std::vector<LabeledSeries> out;
  if (!reader.next(fields)) return out;
  const auto idx = header_index(fields);
  for (const char* col : {"individual_id", "timestamp_iso8601", "activity_level", "label"}) {
    if (!idx.contains(col)) reader.fail(std::string("missing column ") + col);
  }
  std::string id;
  HourStamp start{};
  HourStamp expected{};
  std::vector<std::optional<double>> values;
  std::vector<HourLabel> labels;
  auto flush = [&] {
    if (!values.empty()) out.emplace_back(id, start, std::move(values), std::move(labels));
    values.clear();
    labels.clear();
  };
  while (reader.next(fields)) {
    if (fields.size() != idx.size()) reader.fail("wrong number of fields");
    const std::string& row_id = fields[idx.at("individual_id")];
    const HourStamp t = reader.guarded([&] { return parse_timestamp(fields[idx.at("timestamp_iso8601")]); });
    if (values.empty() || row_id != id) {
      flush();
      id = row_id;
      start = t;
    } else if (t != expected) {
      reader.fail("series '" + id + "' is not contiguous at " + format_timestamp(t));
    }
    expected = t + std::chrono::hours(1);
    values.push_back(reader.guarded([&] { return optional_number(fields[idx.at("activity_level")]); }));
    labels.push_back(reader.guarded([&] { return parse_label(fields[idx.at("label")]); }));
  }
  flush();
  return out;
}

void write_feature_matrix_csv(std::ostream& out, std::span<const Window> windows,
                              std::span<const LabeledSeries> series,
                              std::span<const std::size_t> rows, const FeatureMatrix& matrix) {
  if (rows.size() != matrix.rows()) {
    throw ArgumentError("write_feature_matrix_csv: row list and matrix disagree");
  }
  out << "individual_id,window_start,start_hour_of_period,label";
  for (const auto& n : matrix.names()) out << ',' << quote_if_needed(n);
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Window& w = windows[rows[r]];
    const auto& s = series[w.series_index];
    out << quote_if_needed(w.individual_id) << ','
        << format_timestamp(s.time_at(static_cast<std::size_t>(w.start_index))) << ','
        << w.start_hour_of_period << ',' << label_code(w.label);
    for (double v : matrix.row(r)) out << ',' << format_number(v);
    out << '\n';
  }
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::vector<HourlyObservation> read_records_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_records_csv(in, path.string());
}

AnnotationCalendar read_annotations_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_annotations_csv(in, path.string());
}

std::vector<LabeledSeries> read_series_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_series_csv(in, path.string());
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dielwave
