#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gnf/image.hpp"

namespace gnf {

struct NoiseSpec {
  double variance = 0.0;  // normalized intensity squared
  double mean = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1]; never zero so it is safe under log.
inline double unit_interval(std::uint64_t x) noexcept {
  return static_cast<double>((x >> 11) + 1) * 0x1p-53;
}

}  // namespace detail

// One N(mean, variance) draw for a pixel index. The draw is a pure function
// of (seed, index), so results do not depend on evaluation order and image
// regions can be processed concurrently.
inline double noise_sample(const NoiseSpec& spec, std::uint64_t pixel_index) {
  if (spec.variance < 0.0)
    throw std::invalid_argument("NoiseSpec: variance must be >= 0");
  if (spec.variance == 0.0) return spec.mean;
  std::uint64_t state = spec.seed ^ (0x9E3779B97F4A7C15ULL * (pixel_index + 1));
  const double u1 = detail::unit_interval(detail::splitmix64(state));
  const double u2 = detail::unit_interval(detail::splitmix64(state));
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return spec.mean + std::sqrt(spec.variance) * z;
}

// Perturbs every pixel independently and clamps to [0, 1]; pixels saturate
// the way hardware pixels do. Identical (image, spec) inputs give identical
// outputs.
inline Image add_gaussian_noise(const Image& img, const NoiseSpec& spec) {
  if (spec.variance < 0.0)
    throw std::invalid_argument("NoiseSpec: variance must be >= 0");
  if (spec.variance == 0.0 && spec.mean == 0.0) return img;
  std::vector<double> out(img.pixel_count());
  const std::span<const double> in = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::clamp(in[i] + noise_sample(spec, i), 0.0, 1.0);
  return Image::from_data(img.width(), img.height(), std::move(out));
}

}  // namespace gnf
