#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace asp {

struct NetworkState;

// On-disk network snapshot. Fixed little-endian layout:
//   bytes 0-7   magic "ASPSNAP1"
//   u32 n_exc, u32 n_input
//   u64 presentation_index, u64 seed
//   f64 weights[n_exc*n_input] row-major
//   f64 theta[n_exc]
struct Snapshot {
  std::uint32_t n_exc = 0;
  std::uint32_t n_input = 0;
  std::uint64_t presentation_index = 0;
  std::uint64_t seed = 0;
  std::vector<double> weights;
  std::vector<double> theta;
};

Snapshot snapshot_of(const NetworkState& net, std::uint64_t presentation_index,
                     std::uint64_t seed);
void save_snapshot(const Snapshot& s, const std::string& path);
Snapshot load_snapshot(const std::string& path);

// Restores weights and theta into a freshly reset network.
void restore_snapshot(NetworkState& net, const Snapshot& s);

}  // namespace asp
