#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asp/rng.hpp"

namespace asp {

// Input-layer spikes for one timestep: a 0/1 mask plus the ascending list
// of set indices (the list is what the hot loops consume).
struct InputSpikes {
  std::vector<std::uint8_t> mask;
  std::vector<std::uint32_t> list;

  void reset(int n) {
    mask.assign(std::size_t(n), 0);
    list.clear();
  }
};

// Firing rates proportional to pixel intensity. boost_hz is added uniformly
// to every input when a presentation has to be retried.
struct RateImage {
  std::vector<double> rates_hz;
  double boost_hz = 0.0;
};

double intensity_to_rate(int intensity, double scale_hz_per_unit);
RateImage image_to_rates(std::span<const std::uint8_t> pixels, double scale_hz_per_unit);

// true if some input's per-step firing probability reaches 1 at this dt
bool rates_saturate_step(const RateImage& img, double dt_ms);

// Bernoulli thinning of a Poisson process: each input fires independently
// with probability rate*dt/1000. Exactly one uniform draw per input per
// step, so spike trains are reproducible from the stream alone.
void sample_spikes(const RateImage& img, double dt_ms, RngStream& rng, InputSpikes& out);

}  // namespace asp
