#include "dielwave/feature_matrix.hpp"

#include <algorithm>

#include "dielwave/errors.hpp"

namespace dielwave {

FeatureMatrix::FeatureMatrix(std::vector<std::string> names, std::size_t rows)
    : names_(std::move(names)), rows_(rows), data_(rows * names_.size(), 0.0) {}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ArgumentError("no feature named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

void FeatureMatrix::append_row(std::span<const double> values) {
  if (values.size() != cols()) {
    throw ArgumentError("append_row: expected " + std::to_string(cols()) + " values, got " +
                        std::to_string(values.size()));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out(names_, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) throw ArgumentError("select_rows: row index out of range");
    std::copy_n(row(rows[i]).begin(), cols(), out.row(i).begin());
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(column_index(n));
  FeatureMatrix out(std::vector<std::string>(names.begin(), names.end()), rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) out.at(r, c) = at(r, idx[c]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::hconcat(const FeatureMatrix& left, const FeatureMatrix& right) {
  if (left.rows() != right.rows()) {
    throw ArgumentError("hconcat: row counts differ (" + std::to_string(left.rows()) + " vs " +
                        std::to_string(right.rows()) + ")");
  }
  std::vector<std::string> names = left.names();
  names.insert(names.end(), right.names().begin(), right.names().end());
  FeatureMatrix out(std::move(names), left.rows());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(left.row(r).begin(), left.row(r).end(), dst.begin());
    std::copy(right.row(r).begin(), right.row(r).end(),
              dst.begin() + static_cast<std::ptrdiff_t>(left.cols()));
  }
  return out;
}

FeatureVector FeatureMatrix::named_row(std::size_t r) const {
  FeatureVector out;
  for (std::size_t c = 0; c < cols(); ++c) out.emplace(names_[c], at(r, c));
  return out;
}

}  // namespace dielwave
