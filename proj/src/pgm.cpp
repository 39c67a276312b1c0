#include "asp/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "asp/errors.hpp"

namespace asp {

void write_pgm(const std::string& path, int width, int height,
               std::span<const std::uint8_t> pixels) {
  if (std::size_t(width) * height != pixels.size())
    throw ConfigError(path + ": pixel buffer does not match dimensions");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(path + ": cannot open for writing");
  char header[64];
  const int n = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", width, height);
  f.write(header, n);
  f.write(reinterpret_cast<const char*>(pixels.data()), std::streamsize(pixels.size()));
  if (!f) throw DataError(path + ": write failed");
}

void write_weight_grid(const std::string& path, const Snapshot& snap, int grid_cols,
                       bool global_norm) {
  if (snap.n_input != 784)
    throw ConfigError(path + ": weight grids require 28x28 receptive fields");
  if (grid_cols < 1) throw ConfigError("grid columns must be >= 1");

  const int n = int(snap.n_exc);
  const int rows = (n + grid_cols - 1) / grid_cols;
  const int tile = 28;
  const int width = grid_cols * (tile + 1) - 1;
  const int height = rows * (tile + 1) - 1;
  std::vector<std::uint8_t> canvas(std::size_t(width) * height, 255);  // separators

  double glo = 0.0, ghi = 0.0;
  if (global_norm && !snap.weights.empty()) {
    const auto [mn, mx] = std::minmax_element(snap.weights.begin(), snap.weights.end());
    glo = *mn;
    ghi = *mx;
  }

  for (int j = 0; j < n; ++j) {
    const double* w = snap.weights.data() + std::size_t(j) * 784;
    double lo = glo, hi = ghi;
    if (!global_norm) {
      lo = *std::min_element(w, w + 784);
      hi = *std::max_element(w, w + 784);
    }
    const double span = hi - lo;
    const int ty = (j / grid_cols) * (tile + 1);
    const int tx = (j % grid_cols) * (tile + 1);
    for (int y = 0; y < tile; ++y)
      for (int x = 0; x < tile; ++x) {
        const double v = w[y * tile + x];
        const int g = span > 0.0 ? int(std::lround((v - lo) / span * 255.0)) : 0;
        canvas[std::size_t(ty + y) * width + (tx + x)] =
            std::uint8_t(std::clamp(g, 0, 255));
      }
  }
  // unused tail tiles stay blank
  for (int j = n; j < rows * grid_cols; ++j) {
    const int ty = (j / grid_cols) * (tile + 1);
    const int tx = (j % grid_cols) * (tile + 1);
    for (int y = 0; y < tile; ++y)
      for (int x = 0; x < tile; ++x)
        canvas[std::size_t(ty + y) * width + (tx + x)] = 0;
  }

  write_pgm(path, width, height, canvas);
}

}  // namespace asp
