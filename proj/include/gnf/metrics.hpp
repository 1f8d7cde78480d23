#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "gnf/image.hpp"

namespace gnf {

// Mean squared error over all pixels.
inline double mse(const Image& a, const Image& b) {
  if (!a.same_dimensions(b))
    throw std::invalid_argument("mse: image dimensions differ");
  const std::span<const double> pa = a.pixels();
  const std::span<const double> pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pa.size());
}

// Peak signal-to-noise ratio in dB with peak 1.0 (normalized intensities):
// 10 * log10(1 / mse). Identical images report +infinity.
inline double psnr(const Image& a, const Image& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / e);
}

struct QualityScore {
  double mse = 0.0;
  double psnr_db = 0.0;
};

inline QualityScore quality(const Image& reference, const Image& test) {
  QualityScore q;
  q.mse = mse(reference, test);
  q.psnr_db = q.mse == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(1.0 / q.mse);
  return q;
}

}  // namespace gnf
