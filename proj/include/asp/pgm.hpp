#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "asp/snapshot.hpp"

namespace asp {

// Binary PGM (P5, maxval 255).
void write_pgm(const std::string& path, int width, int height,
               std::span<const std::uint8_t> pixels);

// Tiles each neuron's weight row as a 28x28 patch into a grid, row-major by
// neuron index, with 1-pixel separators. Patches are normalized to [0,255]
// per neuron by default; global_norm uses one range for the whole grid.
void write_weight_grid(const std::string& path, const Snapshot& snap, int grid_cols,
                       bool global_norm = false);

}  // namespace asp
