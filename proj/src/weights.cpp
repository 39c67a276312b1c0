#include "asp/weights.hpp"

#include <algorithm>

namespace asp {

std::span<double> WeightMatrix::materialize_row(int j) {
  double* row = raw_.data() + std::size_t(j) * cols_;
  const double s = scale_[j], d = sub_[j];
  if (s != 1.0 || d != 0.0) {
    for (int i = 0; i < cols_; ++i) row[i] = std::max(0.0, row[i] * s - d);
    scale_[j] = 1.0;
    sub_[j] = 0.0;
  }
  return {row, std::size_t(cols_)};
}

void WeightMatrix::materialize_all() {
  for (int j = 0; j < rows_; ++j) materialize_row(j);
}

std::vector<double> WeightMatrix::dense() const {
  std::vector<double> out(std::size_t(rows_) * std::size_t(cols_), 0.0);
  for (int j = 0; j < rows_; ++j)
    for (int i = 0; i < cols_; ++i) out[std::size_t(j) * cols_ + i] = value(j, i);
  return out;
}

std::vector<double> WeightMatrix::dense_row(int j) const {
  std::vector<double> out(std::size_t(cols_), 0.0);
  for (int i = 0; i < cols_; ++i) out[i] = value(j, i);
  return out;
}

void WeightMatrix::assign_dense(int rows, int cols, std::span<const double> values) {
  rows_ = rows;
  cols_ = cols;
  raw_.assign(values.begin(), values.end());
  scale_.assign(rows, 1.0);
  sub_.assign(rows, 0.0);
}

double WeightMatrix::mean() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < rows_; ++j)
    for (int i = 0; i < cols_; ++i) acc += value(j, i);
  return acc / (double(rows_) * double(cols_));
}

}  // namespace asp
