#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dielwave {

/// Named feature values for one window.
using FeatureVector = std::map<std::string, double>;

/// Dense row-major matrix with named columns.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::vector<std::string> names, std::size_t rows = 0);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::vector<double> column(std::size_t c) const;
  /// Index of a named column; throws ArgumentError if absent.
  std::size_t column_index(const std::string& name) const;

  void append_row(std::span<const double> values);
  /// Rows in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  /// Columns by name, in the given order.
  FeatureMatrix select_columns(std::span<const std::string> names) const;
  /// Side-by-side concatenation of two matrices with equal row counts.
  static FeatureMatrix hconcat(const FeatureMatrix& left, const FeatureMatrix& right);

  FeatureVector named_row(std::size_t r) const;

 private:
  std::vector<std::string> names_;
  std::size_t rows_ = 0;
  std::vector<double> data_;
};

}  // namespace dielwave
