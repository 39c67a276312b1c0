#pragma once

// Deterministic stroke-rendered 28x28 digits for desk-scale experiments.
// Each class is a fixed set of strokes; every sample gets its own affine
// jitter (rotation, anisotropic scale, shear, shift), stroke thickness and
// peak intensity, all drawn from a seeded substream. Rendering is pure, so
// a (seed, class, instance) triple always yields the same image.

#include <array>
#include <cstdint>

#include "asp/dataio.hpp"
#include "asp/rng.hpp"

namespace testsupport {

std::array<std::uint8_t, 784> make_digit(int digit_class, asp::RngStream& rng);

// Balanced set with classes interleaved round-robin (index i holds class
// i % 10), so any prefix or suffix stays balanced.
asp::ImageSet make_digit_set(int per_class, std::uint64_t seed);

// Like make_digit_set but restricted to the given classes, still interleaved.
asp::ImageSet make_digit_set(int per_class, std::uint64_t seed,
                             std::span<const int> classes);

}  // namespace testsupport
