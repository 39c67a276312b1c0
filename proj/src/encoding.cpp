#include "asp/encoding.hpp"

namespace asp {

double intensity_to_rate(int intensity, double scale_hz_per_unit) {
  return double(intensity) * scale_hz_per_unit;
}

RateImage image_to_rates(std::span<const std::uint8_t> pixels,
                         double scale_hz_per_unit) {
  RateImage img;
  img.rates_hz.resize(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i)
    img.rates_hz[i] = intensity_to_rate(pixels[i], scale_hz_per_unit);
  return img;
}

bool rates_saturate_step(const RateImage& img, double dt_ms) {
  const double k = dt_ms / 1000.0;
  for (double r : img.rates_hz)
    if ((r + img.boost_hz) * k >= 1.0) return true;
  return false;
}

void sample_spikes(const RateImage& img, double dt_ms, RngStream& rng,
                   InputSpikes& out) {
  const int n = int(img.rates_hz.size());
  out.reset(n);
  const double k = dt_ms / 1000.0;
  for (int i = 0; i < n; ++i) {
    const double p = (img.rates_hz[i] + img.boost_hz) * k;
    // one draw per input per step, even at p == 0, so the stream position
    // is a function of step count alone
    if (rng.next_double() < p) {
      out.mask[i] = 1;
      out.list.push_back(std::uint32_t(i));
    }
  }
}

}  // namespace asp
