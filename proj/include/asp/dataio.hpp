#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "asp/rng.hpp"

namespace asp {

// A labeled set of 28x28 grayscale images, stored flat.
struct ImageSet {
  int width = 28, height = 28;
  std::vector<std::uint8_t> pixels;  // n * width*height
  std::vector<std::uint8_t> labels;  // n, class ids 0-9

  int n() const { return int(labels.size()); }
  int pixels_per_image() const { return width * height; }

  std::span<const std::uint8_t> image(int i) const {
    return {pixels.data() + std::size_t(i) * pixels_per_image(),
            std::size_t(pixels_per_image())};
  }
  std::span<std::uint8_t> image(int i) {
    return {pixels.data() + std::size_t(i) * pixels_per_image(),
            std::size_t(pixels_per_image())};
  }

  ImageSet head(int count) const;                       // first count images
  ImageSet tail(int count) const;                       // last count images
  ImageSet filter_classes(std::span<const int> keep) const;
};

// Big-endian IDX files (magic 2051 for images, 2049 for labels). Errors
// carry the offending path and byte offset.
ImageSet load_idx(const std::string& images_path, const std::string& labels_path);
void save_idx(const ImageSet& set, const std::string& images_path,
              const std::string& labels_path);

// Adds white Gaussian noise sized so 10*log10(signal/noise power) = snr_db,
// with signal power taken per image over [0,1]-normalized intensities. An
// all-zero image falls back to floor_var and logs a warning. Output clipped
// to [0,255].
void add_awgn(std::span<std::uint8_t> image, double snr_db, RngStream& rng,
              double floor_var = 1e-4);

// Scales intensities about mid-gray: out = 128 + factor*(in - 128), with
// exact .5 results rounded toward mid-gray.
void reduce_contrast(std::span<std::uint8_t> image, double contrast_factor);

enum class NoiseKind { Awgn, AwgnReducedContrast };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Awgn;
  double snr_db = 9.5;
  double contrast_factor = 0.5;  // used by AwgnReducedContrast; applied first
};

// Noises every image with a per-image substream of `seed`, so outputs are
// deterministic and images are independent.
ImageSet apply_noise(const ImageSet& set, const NoiseSpec& spec, std::uint64_t seed,
                     double floor_var = 1e-4);

// Plain-text sidecar recording how a noisy set was synthesized.
void write_noise_sidecar(const std::string& path, const NoiseSpec& spec,
                         std::uint64_t seed);

struct Schedule {
  enum class Mode { Sequential, Intermixed, Custom };
  std::vector<std::pair<int, int>> entries;  // (image index, class id)
  Mode mode = Mode::Intermixed;
  std::map<int, int> per_class_counts;
};

// Builds a presentation schedule. For each requested class the first
// `count` images of that class (dataset order) are used. Sequential mode
// emits one block per class, in class_order if given, otherwise ascending;
// intermixed mode shuffles the whole multiset with the seed.
Schedule build_schedule(const ImageSet& set, Schedule::Mode mode,
                        const std::map<int, int>& per_class_counts,
                        std::uint64_t seed, std::span<const int> class_order = {});

// Linearly changing counts: class_order[k] gets base + k*step presentations.
std::map<int, int> linear_counts(std::span<const int> classes, int base, int step);

}  // namespace asp
