#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace asp {

// Dense row-major weight matrix, one row per excitatory neuron.
//
// The adaptive leak multiplies (or shifts) an entire row by a single
// per-step amount, so decay is accumulated lazily per row instead of
// touching every synapse every timestep: the effective value is always
//
//     w_eff = max(0, raw * scale - sub)
//
// and pending decay is folded into raw storage only when a row is edited
// or exported. Successive subtractive decays with one final clamp at zero
// are exactly equivalent to clamping every step, so laziness never changes
// the arithmetic beyond normal rounding.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows),
        cols_(cols),
        raw_(std::size_t(rows) * cols, fill),
        scale_(rows, 1.0),
        sub_(rows, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double value(int j, int i) const {
    const double v = raw_[std::size_t(j) * cols_ + i] * scale_[j] - sub_[j];
    return v > 0.0 ? v : 0.0;
  }

  void decay_row_exponential(int j, double factor) {
    // max(0, raw*s - d) * f == max(0, raw*s*f - d*f), so the pending
    // subtraction scales along with the row
    scale_[j] *= factor;
    sub_[j] *= factor;
    if (scale_[j] < 1e-280) materialize_row(j);  // keep well clear of denormals
  }

  void decay_row_linear(int j, double amount) {
    sub_[j] += amount;
    if (sub_[j] > 1e12) materialize_row(j);
  }

  bool row_pristine(int j) const { return scale_[j] == 1.0 && sub_[j] == 0.0; }

  // Folds pending decay into storage; the returned span may then be edited.
  std::span<double> materialize_row(int j);
  void materialize_all();

  // Effective values, row-major. Does not disturb pending decay.
  std::vector<double> dense() const;
  std::vector<double> dense_row(int j) const;

  // Replaces contents with the given row-major values, clearing pending decay.
  void assign_dense(int rows, int cols, std::span<const double> values);

  double mean() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> raw_;
  std::vector<double> scale_;  // pending multiplicative decay per row
  std::vector<double> sub_;    // pending subtractive decay per row
};

}  // namespace asp
