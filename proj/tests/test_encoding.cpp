#include <doctest.h>

#include <cmath>

#include "asp/encoding.hpp"

using namespace asp;

TEST_SUITE("encoding") {

TEST_CASE("intensity maps proportionally to rate") {
  CHECK(intensity_to_rate(0, 0.25) == 0.0);
  CHECK(intensity_to_rate(128, 0.25) == doctest::Approx(32.0));
  CHECK(intensity_to_rate(255, 0.25) == doctest::Approx(63.75));
  // monotone by construction; spot-check a grid
  for (int a = 0; a < 255; ++a)
    CHECK(intensity_to_rate(a, 0.25) <= intensity_to_rate(a + 1, 0.25));
}

TEST_CASE("zero rate never fires") {
  RateImage img;
  img.rates_hz = {0.0, 0.0};
  RngStream rng(3);
  InputSpikes out;
  for (int k = 0; k < 5000; ++k) {
    sample_spikes(img, 0.5, rng, out);
    CHECK(out.list.empty());
  }
}

TEST_CASE("same seed gives identical spike trains") {
  RateImage img;
  img.rates_hz = {10.0, 40.0, 63.75};
  RngStream r1(99), r2(99);
  InputSpikes a, b;
  for (int k = 0; k < 2000; ++k) {
    sample_spikes(img, 0.5, r1, a);
    sample_spikes(img, 0.5, r2, b);
    REQUIRE(a.list == b.list);
  }
}

TEST_CASE("spike counts follow the binomial expectation at 63.75 Hz") {
  // 700 steps of p = 63.75 * 0.0005 per presentation; mean 22.3125
  RateImage img;
  img.rates_hz = {63.75};
  RngStream rng(12345);
  InputSpikes out;
  const int presentations = 10000, steps = 700;
  double total = 0.0;
  for (int p = 0; p < presentations; ++p)
    for (int k = 0; k < steps; ++k) {
      sample_spikes(img, 0.5, rng, out);
      total += double(out.list.size());
    }
  const double mean = total / presentations;
  const double p1 = 63.75 * 0.5 / 1000.0;
  const double sigma_mean = std::sqrt(steps * p1 * (1 - p1) / presentations);
  CHECK(std::fabs(mean - 22.3125) <= 3.0 * sigma_mean);
}

TEST_CASE("empirical rate converges to the requested rate") {
  for (double rate : {8.0, 30.0, 63.75}) {
    RateImage img;
    img.rates_hz = {rate};
    RngStream rng(std::uint64_t(rate * 100));
    InputSpikes out;
    const double T = 40.0;  // seconds
    const int steps = int(T * 1000 / 0.5);
    int count = 0;
    for (int k = 0; k < steps; ++k) {
      sample_spikes(img, 0.5, rng, out);
      count += int(out.list.size());
    }
    CHECK(std::fabs(count / T - rate) <= 3.0 * std::sqrt(rate / T));
  }
}

TEST_CASE("boost applies uniformly and saturation is detected") {
  RateImage img;
  img.rates_hz = {0.0, 100.0};
  img.boost_hz = 32.0;
  CHECK_FALSE(rates_saturate_step(img, 0.5));
  img.boost_hz = 2000.0;
  CHECK(rates_saturate_step(img, 0.5));

  // a zero-rate input fires once boosted
  img.boost_hz = 500.0;
  RngStream rng(5);
  InputSpikes out;
  int fired = 0;
  for (int k = 0; k < 1000; ++k) {
    sample_spikes(img, 0.5, rng, out);
    fired += out.mask[0];
  }
  CHECK(fired > 100);
}

}  // TEST_SUITE
