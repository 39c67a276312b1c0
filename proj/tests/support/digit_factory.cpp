#include "support/digit_factory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace testsupport {

namespace {

struct Pt {
  double x, y;
};

using Stroke = std::vector<Pt>;

std::vector<Stroke> oval(double cx, double cy, double rx, double ry) {
  Stroke s;
  const int kSegments = 14;
  for (int k = 0; k <= kSegments; ++k) {
    const double a = 2.0 * 3.14159265358979323846 * k / kSegments;
    s.push_back({cx + rx * std::sin(a), cy - ry * std::cos(a)});
  }
  return {s};
}

std::vector<Stroke> digit_strokes(int digit_class) {
  switch (digit_class) {
    case 0:
      return oval(14.0, 14.5, 5.5, 7.5);
    case 1:
      return {{{14, 6}, {14, 22}}, {{14, 6}, {10.5, 9.5}}};
    case 2:
      return {{{9.5, 10},  {10.5, 7.5}, {13, 6},   {16, 6.5}, {18, 8.5},
               {18, 11},   {16, 14},    {12.5, 17}, {10, 19.5}, {9.5, 21}},
              {{9.5, 21}, {18.5, 21}}};
    case 3:
      return {{{10, 7}, {13.5, 5.8}, {16.5, 7}, {17.5, 9.5}, {16, 12}, {13.5, 13}},
              {{13.5, 13}, {17, 14.5}, {18, 17.5}, {16.5, 20.5}, {13, 22}, {9.8, 20.5}}};
    case 4:
      return {{{16.5, 5.5}, {16.5, 22.5}},
              {{16.5, 5.5}, {8.5, 15.5}},
              {{8.5, 15.5}, {20, 15.5}}};
    case 5:
      return {{{17.5, 6}, {10, 6}, {9.5, 13}, {13, 12}, {16, 13}, {18, 15.5},
               {18, 18.5}, {15.5, 21.5}, {12, 22}, {9.5, 20}}};
    case 6: {
      auto strokes = oval(13.8, 17.3, 4.0, 4.4);
      strokes.push_back({{16.5, 5.5}, {13, 8}, {10.5, 12}, {9.8, 16}});
      return strokes;
    }
    case 7:
      return {{{9.5, 6.5}, {18.5, 6.5}, {13, 22}}, {{11.5, 14.5}, {16.5, 14.5}}};
    case 8: {
      auto strokes = oval(14.0, 10.0, 3.6, 4.0);
      auto bottom = oval(14.0, 18.0, 4.3, 4.4);
      strokes.insert(strokes.end(), bottom.begin(), bottom.end());
      return strokes;
    }
    case 9: {
      auto strokes = oval(14.0, 10.5, 4.2, 4.5);
      strokes.push_back({{18.2, 11.5}, {16.5, 22}});
      return strokes;
    }
    default:
      return {};
  }
}

double dist_to_segment(double px, double py, const Pt& a, const Pt& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qx = a.x + t * dx, qy = a.y + t * dy;
  return std::hypot(px - qx, py - qy);
}

}  // namespace

std::array<std::uint8_t, 784> make_digit(int digit_class, asp::RngStream& rng) {
  auto strokes = digit_strokes(digit_class);

  const double rot = (rng.next_double() * 2.0 - 1.0) * 0.18;
  const double sx = 0.85 + rng.next_double() * 0.27;
  const double sy = 0.85 + rng.next_double() * 0.27;
  const double shear = (rng.next_double() * 2.0 - 1.0) * 0.15;
  const double tx = (rng.next_double() * 2.0 - 1.0) * 2.0;
  const double ty = (rng.next_double() * 2.0 - 1.0) * 2.0;
  const double thickness = 1.0 + rng.next_double() * 0.6;
  const double peak = 0.72 + rng.next_double() * 0.28;

  const double c = std::cos(rot), s = std::sin(rot);
  for (auto& stroke : strokes)
    for (auto& p : stroke) {
      double x = (p.x - 14.0) * sx;
      double y = (p.y - 14.0) * sy;
      x += shear * y;
      const double xr = c * x - s * y;
      const double yr = s * x + c * y;
      p = {xr + 14.0 + tx, yr + 14.0 + ty};
    }

  std::array<std::uint8_t, 784> img{};
  for (int y = 0; y < 28; ++y)
    for (int x = 0; x < 28; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      double d = 1e9;
      for (const auto& stroke : strokes)
        for (std::size_t k = 0; k + 1 < stroke.size(); ++k)
          d = std::min(d, dist_to_segment(px, py, stroke[k], stroke[k + 1]));
      const double v = std::clamp((thickness + 0.9 - d) / 0.9, 0.0, 1.0);
      img[y * 28 + x] = std::uint8_t(std::lround(255.0 * peak * v));
    }
  return img;
}

namespace {

asp::ImageSet build_set(int per_class, std::uint64_t seed,
                        std::span<const int> classes) {
  asp::ImageSet set;
  set.pixels.reserve(std::size_t(per_class) * classes.size() * 784);
  for (int k = 0; k < per_class; ++k)
    for (int c : classes) {
      asp::RngStream rng = asp::RngStream::derive(
          seed, 0xd161u, std::uint64_t(c) * 1000003u + std::uint64_t(k));
      const auto img = make_digit(c, rng);
      set.pixels.insert(set.pixels.end(), img.begin(), img.end());
      set.labels.push_back(std::uint8_t(c));
    }
  return set;
}

}  // namespace

asp::ImageSet make_digit_set(int per_class, std::uint64_t seed) {
  static const int kAll[10] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  return build_set(per_class, seed, kAll);
}

asp::ImageSet make_digit_set(int per_class, std::uint64_t seed,
                             std::span<const int> classes) {
  return build_set(per_class, seed, classes);
}

}  // namespace testsupport
