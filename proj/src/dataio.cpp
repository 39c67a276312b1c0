#include "asp/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "asp/errors.hpp"

namespace asp {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open");
  f.seekg(0, std::ios::end);
  const auto size = f.tellg();
  f.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> buf(std::size_t(size), 0);
  if (size > 0) f.read(reinterpret_cast<char*>(buf.data()), size);
  if (!f) throw DataError(path + ": read failed");
  return buf;
}

void write_file(const std::string& path, const std::uint8_t* data, std::size_t n) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(path + ": cannot open for writing");
  f.write(reinterpret_cast<const char*>(data), std::streamsize(n));
  if (!f) throw DataError(path + ": write failed");
}

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

constexpr std::uint32_t kImageMagic = 2051;  // 0x00000803
constexpr std::uint32_t kLabelMagic = 2049;  // 0x00000801

}  // namespace

ImageSet ImageSet::head(int count) const {
  ImageSet out;
  out.width = width;
  out.height = height;
  count = std::min(count, n());
  out.pixels.assign(pixels.begin(), pixels.begin() + std::size_t(count) * pixels_per_image());
  out.labels.assign(labels.begin(), labels.begin() + count);
  return out;
}

ImageSet ImageSet::tail(int count) const {
  ImageSet out;
  out.width = width;
  out.height = height;
  count = std::min(count, n());
  const int start = n() - count;
  out.pixels.assign(pixels.begin() + std::size_t(start) * pixels_per_image(), pixels.end());
  out.labels.assign(labels.begin() + start, labels.end());
  return out;
}

ImageSet ImageSet::filter_classes(std::span<const int> keep) const {
  ImageSet out;
  out.width = width;
  out.height = height;
  for (int i = 0; i < n(); ++i) {
    if (std::find(keep.begin(), keep.end(), int(labels[i])) == keep.end()) continue;
    auto img = image(i);
    out.pixels.insert(out.pixels.end(), img.begin(), img.end());
    out.labels.push_back(labels[i]);
  }
  return out;
}

ImageSet load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto ib = read_file(images_path);
  if (ib.size() < 16)
    throw DataError(images_path + ": truncated header, expected 16 bytes, got " +
                    std::to_string(ib.size()));
  const std::uint32_t magic = read_be32(ib.data());
  if (magic != kImageMagic)
    throw DataError(images_path + ": bad magic " + std::to_string(magic) +
                    " at offset 0, expected " + std::to_string(kImageMagic));
  const std::uint32_t count = read_be32(ib.data() + 4);
  const std::uint32_t rows = read_be32(ib.data() + 8);
  const std::uint32_t cols = read_be32(ib.data() + 12);
  if (rows != 28 || cols != 28)
    throw DataError(images_path + ": expected 28x28 images, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  const std::size_t expected = 16 + std::size_t(count) * rows * cols;
  if (ib.size() != expected)
    throw DataError(images_path + ": expected " + std::to_string(expected) +
                    " bytes, got " + std::to_string(ib.size()) +
                    " (payload starts at offset 16)");

  const auto lb = read_file(labels_path);
  if (lb.size() < 8)
    throw DataError(labels_path + ": truncated header, expected 8 bytes, got " +
                    std::to_string(lb.size()));
  const std::uint32_t lmagic = read_be32(lb.data());
  if (lmagic != kLabelMagic)
    throw DataError(labels_path + ": bad magic " + std::to_string(lmagic) +
                    " at offset 0, expected " + std::to_string(kLabelMagic));
  const std::uint32_t lcount = read_be32(lb.data() + 4);
  if (lb.size() != 8 + std::size_t(lcount))
    throw DataError(labels_path + ": expected " + std::to_string(8 + lcount) +
                    " bytes, got " + std::to_string(lb.size()) +
                    " (payload starts at offset 8)");
  if (lcount != count)
    throw DataError(images_path + ": " + std::to_string(count) + " images but " +
                    std::to_string(lcount) + " labels in " + labels_path);

  ImageSet set;
  set.width = int(cols);
  set.height = int(rows);
  set.pixels.assign(ib.begin() + 16, ib.end());
  set.labels.assign(lb.begin() + 8, lb.end());
  return set;
}

void save_idx(const ImageSet& set, const std::string& images_path,
              const std::string& labels_path) {
  std::vector<std::uint8_t> ib;
  ib.reserve(16 + set.pixels.size());
  put_be32(ib, kImageMagic);
  put_be32(ib, std::uint32_t(set.n()));
  put_be32(ib, std::uint32_t(set.height));
  put_be32(ib, std::uint32_t(set.width));
  ib.insert(ib.end(), set.pixels.begin(), set.pixels.end());
  write_file(images_path, ib.data(), ib.size());

  std::vector<std::uint8_t> lb;
  lb.reserve(8 + set.labels.size());
  put_be32(lb, kLabelMagic);
  put_be32(lb, std::uint32_t(set.n()));
  lb.insert(lb.end(), set.labels.begin(), set.labels.end());
  write_file(labels_path, lb.data(), lb.size());
}

namespace {

// round half toward mid-gray so symmetric scalings stay symmetric
int round_half_to_zero(double x) {
  const double t = std::trunc(x);
  const double frac = x - t;
  if (frac > 0.5) return int(t) + 1;
  if (frac < -0.5) return int(t) - 1;
  return int(t);
}

std::uint8_t clamp_byte(long v) {
  return std::uint8_t(std::clamp(v, 0l, 255l));
}

}  // namespace

void add_awgn(std::span<std::uint8_t> image, double snr_db, RngStream& rng,
              double floor_var) {
  double power = 0.0;
  for (std::uint8_t b : image) {
    const double x = double(b) / 255.0;
    power += x * x;
  }
  power /= double(image.size());

  double var = power / std::pow(10.0, snr_db / 10.0);
  if (power <= 0.0) {
    var = floor_var;
    std::fprintf(stderr,
                 "warning: all-zero image, falling back to noise variance %g\n",
                 floor_var);
  }
  const double sigma = std::sqrt(var);
  for (std::uint8_t& b : image) {
    const double y = double(b) / 255.0 + sigma * rng.next_gaussian();
    b = clamp_byte(std::lround(y * 255.0));
  }
}

void reduce_contrast(std::span<std::uint8_t> image, double contrast_factor) {
  for (std::uint8_t& b : image) {
    const double y = 128.0 + contrast_factor * (double(b) - 128.0);
    b = clamp_byte(round_half_to_zero(y));
  }
}

ImageSet apply_noise(const ImageSet& set, const NoiseSpec& spec, std::uint64_t seed,
                     double floor_var) {
  ImageSet out = set;
  for (int i = 0; i < out.n(); ++i) {
    RngStream rng = RngStream::derive(seed, rng_tag::noise, std::uint64_t(i));
    auto img = out.image(i);
    if (spec.kind == NoiseKind::AwgnReducedContrast)
      reduce_contrast(img, spec.contrast_factor);
    add_awgn(img, spec.snr_db, rng, floor_var);
  }
  return out;
}

void write_noise_sidecar(const std::string& path, const NoiseSpec& spec,
                         std::uint64_t seed) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError(path + ": cannot open for writing");
  f << "kind=" << (spec.kind == NoiseKind::Awgn ? "awgn" : "awgn_reduced_contrast")
    << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", spec.snr_db);
  f << "snr_db=" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.9g", spec.contrast_factor);
  f << "contrast_factor=" << buf << "\n";
  f << "seed=" << seed << "\n";
}

Schedule build_schedule(const ImageSet& set, Schedule::Mode mode,
                        const std::map<int, int>& per_class_counts,
                        std::uint64_t seed, std::span<const int> class_order) {
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < set.n(); ++i) by_class[int(set.labels[i])].push_back(i);

  for (const auto& [cls, want] : per_class_counts) {
    const int have = int(by_class.count(cls) ? by_class[cls].size() : 0);
    if (want > have)
      throw DataError("class " + std::to_string(cls) + ": requested " +
                      std::to_string(want) + " images, only " +
                      std::to_string(have) + " available (short by " +
                      std::to_string(want - have) + ")");
  }

  std::vector<int> order;
  if (!class_order.empty()) {
    order.assign(class_order.begin(), class_order.end());
  } else {
    for (const auto& [cls, count] : per_class_counts) order.push_back(cls);
  }

  Schedule sched;
  sched.mode = mode;
  sched.per_class_counts = per_class_counts;
  for (int cls : order) {
    const auto it = per_class_counts.find(cls);
    if (it == per_class_counts.end()) continue;
    const auto& pool = by_class[cls];
    for (int k = 0; k < it->second; ++k) sched.entries.emplace_back(pool[k], cls);
  }

  if (mode == Schedule::Mode::Intermixed) {
    RngStream rng = RngStream::derive(seed, rng_tag::schedule, 0);
    for (std::size_t i = sched.entries.size(); i > 1; --i)
      std::swap(sched.entries[i - 1], sched.entries[rng.next_below(i)]);
  }
  return sched;
}

std::map<int, int> linear_counts(std::span<const int> classes, int base, int step) {
  std::map<int, int> counts;
  int k = 0;
  for (int cls : classes) counts[cls] = base + step * k++;
  return counts;
}

}  // namespace asp
