#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "gnf/image.hpp"

namespace gnf {

// Similarity threshold in normalized intensity units.
class Threshold {
 public:
  explicit Threshold(double theta) : theta_(theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
      throw std::invalid_argument("Threshold: value outside [0, 1]");
  }
  double value() const noexcept { return theta_; }

 private:
  double theta_;
};

// Binary gate per window position: 1 marks a neighbor within the threshold of
// the center pixel, 0 excludes it from the averaging. The center gate is
// always 1 since its difference to itself is zero.
struct SimilarityMask {
  std::array<std::uint8_t, 9> bits{};
  int n = 0;  // number of set gates, 1..9
};

inline SimilarityMask similarity_mask(const Window3x3& w, Threshold theta) {
  SimilarityMask m;
  const double center = w.values[4];
  for (int k = 0; k < 9; ++k) {
    m.bits[k] = std::fabs(w.values[k] - center) <= theta.value() ? 1 : 0;
    m.n += m.bits[k];
  }
  return m;
}

// Mean of the gated window values with weight 1/n, n = number of set gates.
// A window whose gated values are all identical returns that value directly,
// so flat regions pass through without accumulation round-off.
inline double masked_mean(const Window3x3& w, const std::array<std::uint8_t, 9>& bits) {
  double sum = 0.0;
  double first = 0.0;
  int n = 0;
  bool all_equal = true;
  for (int k = 0; k < 9; ++k) {
    if (!bits[k]) continue;
    const double v = w.values[k];
    if (n == 0) first = v;
    else if (v != first) all_equal = false;
    sum += v;
    ++n;
  }
  if (n == 0)
    throw std::domain_error("masked_mean: no active gates");
  return all_equal ? first : sum / n;
}

inline double adaptive_mean(const Window3x3& w, const SimilarityMask& m) {
  return masked_mean(w, m.bits);
}

// 5th order statistic of the nine window values.
inline double median_of_window(const Window3x3& w) {
  std::array<double, 9> v = w.values;
  std::nth_element(v.begin(), v.begin() + 4, v.end());
  return v[4];
}

struct FilterKind {
  enum class Type { mean, median, adaptive_mean };

  Type type = Type::mean;
  Threshold theta{0.0};  // only meaningful for adaptive_mean

  static FilterKind mean() { return {Type::mean, Threshold{0.0}}; }
  static FilterKind median() { return {Type::median, Threshold{0.0}}; }
  static FilterKind adaptive(Threshold theta) { return {Type::adaptive_mean, theta}; }

  std::string_view label() const noexcept {
    switch (type) {
      case Type::mean: return "mean";
      case Type::median: return "median";
      case Type::adaptive_mean: return "adaptive";
    }
    return "?";
  }
};

inline constexpr std::array<std::uint8_t, 9> all_gates_open{1, 1, 1, 1, 1, 1, 1, 1, 1};

// Applies a 3x3 filter over the whole image; output has the same dimensions.
inline Image filter_image(const Image& img, const FilterKind& kind,
                          BorderPolicy policy = BorderPolicy::replicate) {
  std::vector<double> out(img.pixel_count());
  std::size_t i = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x, ++i) {
      const Window3x3 w = window_at(img, x, y, policy);
      double v = 0.0;
      switch (kind.type) {
        case FilterKind::Type::mean:
          v = masked_mean(w, all_gates_open);
          break;
        case FilterKind::Type::median:
          v = median_of_window(w);
          break;
        case FilterKind::Type::adaptive_mean:
          v = adaptive_mean(w, similarity_mask(w, kind.theta));
          break;
      }
      out[i] = std::clamp(v, 0.0, 1.0);
    }
  }
  return Image::from_data(img.width(), img.height(), std::move(out));
}

}  // namespace gnf
