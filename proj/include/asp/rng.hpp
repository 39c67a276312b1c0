#pragma once

#include <cmath>
#include <cstdint>

namespace asp {

// Counter-based 64-bit generator: a splitmix64 finalizer applied to an
// incrementing counter. Streams fork cheaply via derive(seed, tag, index),
// so every presentation / image / noise draw gets its own substream and
// results do not depend on execution order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : ctr_(mix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

  static RngStream derive(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    const std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull * (tag + 1));
    return RngStream(mix64(h ^ (index + 0x6a09e667f3bcc909ull)));
  }

  std::uint64_t next_u64() {
    ctr_ += 0x9e3779b97f4a7c15ull;
    return mix64(ctr_);
  }

  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), rejection-sampled to stay unbiased
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // standard normal via Box-Muller; consumes two uniforms per pair
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t ctr_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Substream tags used across the project; kept in one place so seeds never
// collide between phases.
namespace rng_tag {
inline constexpr std::uint64_t init = 1;      // weight initialization
inline constexpr std::uint64_t train = 2;     // one stream per training presentation
inline constexpr std::uint64_t label = 3;     // one stream per labeling image
inline constexpr std::uint64_t eval = 4;      // one stream per test image
inline constexpr std::uint64_t noise = 5;     // one stream per noised image
inline constexpr std::uint64_t schedule = 6;  // schedule shuffling
}  // namespace rng_tag

}  // namespace asp
