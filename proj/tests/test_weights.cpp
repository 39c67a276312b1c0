#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "asp/rng.hpp"
#include "asp/weights.hpp"

using namespace asp;

TEST_SUITE("weights") {

TEST_CASE("values reflect pending decay without materializing") {
  WeightMatrix w(2, 3, 0.5);
  w.decay_row_exponential(0, 0.5);
  CHECK(w.value(0, 1) == doctest::Approx(0.25));
  CHECK(w.value(1, 1) == doctest::Approx(0.5));
  w.decay_row_linear(1, 0.2);
  CHECK(w.value(1, 0) == doctest::Approx(0.3));
}

TEST_CASE("linear decay clamps at zero") {
  WeightMatrix w(1, 2, 0.1);
  w.decay_row_linear(0, 0.4);
  CHECK(w.value(0, 0) == 0.0);
  CHECK(w.value(0, 1) == 0.0);
  // a later edit starts from the clamped value
  auto row = w.materialize_row(0);
  CHECK(row[0] == 0.0);
}

TEST_CASE("lazy decay matches an eager per-step reference") {
  // random interleaving of decays, edits and reads must agree with a dense
  // matrix updated step by step
  RngStream rng(77);
  const int rows = 4, cols = 6;
  WeightMatrix lazy(rows, cols);
  std::vector<double> eager(std::size_t(rows) * cols);
  for (int j = 0; j < rows; ++j) {
    auto r = lazy.materialize_row(j);
    for (int i = 0; i < cols; ++i) {
      r[i] = rng.next_double();
      eager[std::size_t(j) * cols + i] = r[i];
    }
  }

  for (int step = 0; step < 5000; ++step) {
    const int j = int(rng.next_below(rows));
    const double roll = rng.next_double();
    if (roll < 0.45) {
      const double f = 0.9 + 0.1 * rng.next_double();
      lazy.decay_row_exponential(j, f);
      for (int i = 0; i < cols; ++i) eager[std::size_t(j) * cols + i] *= f;
    } else if (roll < 0.9) {
      const double d = 0.05 * rng.next_double();
      lazy.decay_row_linear(j, d);
      for (int i = 0; i < cols; ++i) {
        double& v = eager[std::size_t(j) * cols + i];
        v = std::max(0.0, v - d);
      }
    } else {
      const int i = int(rng.next_below(cols));
      const double add = rng.next_double() * 0.5;
      auto row = lazy.materialize_row(j);
      row[i] = std::min(1.0, row[i] + add);
      double& v = eager[std::size_t(j) * cols + i];
      v = std::min(1.0, v + add);
    }
    if (step % 7 == 0) {
      const int i = int(rng.next_below(cols));
      CHECK(lazy.value(j, i) == doctest::Approx(eager[std::size_t(j) * cols + i])
                                    .epsilon(1e-9));
    }
  }

  const auto dense = lazy.dense();
  for (std::size_t k = 0; k < dense.size(); ++k)
    CHECK(dense[k] == doctest::Approx(eager[k]).epsilon(1e-9));
}

TEST_CASE("mean and dense ignore materialization state") {
  WeightMatrix w(2, 2, 0.8);
  w.decay_row_exponential(0, 0.5);
  const double before = w.mean();
  const auto dense_before = w.dense();
  w.materialize_all();
  CHECK(w.mean() == doctest::Approx(before));
  const auto dense_after = w.dense();
  for (std::size_t k = 0; k < dense_after.size(); ++k)
    CHECK(dense_after[k] == doctest::Approx(dense_before[k]));
}

TEST_CASE("assign_dense resets pending decay") {
  WeightMatrix w(1, 2, 0.4);
  w.decay_row_exponential(0, 0.25);
  const std::vector<double> vals{0.7, 0.2};
  w.assign_dense(1, 2, vals);
  CHECK(w.value(0, 0) == 0.7);
  CHECK(w.value(0, 1) == 0.2);
}

}  // TEST_SUITE
