#include "asp/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "asp/errors.hpp"
#include "asp/sim.hpp"

namespace asp {

static_assert(std::endian::native == std::endian::little,
              "snapshot layout assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'A', 'S', 'P', 'S', 'N', 'A', 'P', '1'};

template <typename T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::ifstream& f, const std::string& path) {
  T v;
  f.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!f) throw DataError(path + ": truncated snapshot");
  return v;
}
}  // namespace

Snapshot snapshot_of(const NetworkState& net, std::uint64_t presentation_index,
                     std::uint64_t seed) {
  Snapshot s;
  s.n_exc = std::uint32_t(net.n_exc);
  s.n_input = std::uint32_t(net.n_input);
  s.presentation_index = presentation_index;
  s.seed = seed;
  s.weights = net.weights.dense();
  s.theta.resize(std::size_t(net.n_exc));
  for (int j = 0; j < net.n_exc; ++j) s.theta[j] = net.exc[j].theta;
  return s;
}

void save_snapshot(const Snapshot& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(path + ": cannot open for writing");
  f.write(kMagic, sizeof kMagic);
  put(f, s.n_exc);
  put(f, s.n_input);
  put(f, s.presentation_index);
  put(f, s.seed);
  f.write(reinterpret_cast<const char*>(s.weights.data()),
          std::streamsize(s.weights.size() * sizeof(double)));
  f.write(reinterpret_cast<const char*>(s.theta.data()),
          std::streamsize(s.theta.size() * sizeof(double)));
  if (!f) throw DataError(path + ": write failed");
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open");
  char magic[8];
  f.read(magic, sizeof magic);
  if (!f || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw DataError(path + ": not a snapshot file (bad magic at offset 0)");
  Snapshot s;
  s.n_exc = take<std::uint32_t>(f, path);
  s.n_input = take<std::uint32_t>(f, path);
  s.presentation_index = take<std::uint64_t>(f, path);
  s.seed = take<std::uint64_t>(f, path);
  s.weights.resize(std::size_t(s.n_exc) * s.n_input);
  s.theta.resize(s.n_exc);
  f.read(reinterpret_cast<char*>(s.weights.data()),
         std::streamsize(s.weights.size() * sizeof(double)));
  f.read(reinterpret_cast<char*>(s.theta.data()),
         std::streamsize(s.theta.size() * sizeof(double)));
  if (!f) throw DataError(path + ": truncated snapshot payload");
  return s;
}

void restore_snapshot(NetworkState& net, const Snapshot& s) {
  if (int(s.n_exc) != net.n_exc || int(s.n_input) != net.n_input)
    throw ConfigError("snapshot is " + std::to_string(s.n_exc) + "x" +
                      std::to_string(s.n_input) + ", network is " +
                      std::to_string(net.n_exc) + "x" + std::to_string(net.n_input));
  net.weights.assign_dense(int(s.n_exc), int(s.n_input), s.weights);
  for (int j = 0; j < net.n_exc; ++j) net.exc[j].theta = s.theta[j];
}

}  // namespace asp
