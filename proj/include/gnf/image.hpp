#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gnf {

// Grayscale image with normalized intensities in [0, 1], stored row-major.
// Immutable after construction; every filtering operation returns a new image,
// so instances can be shared freely across threads.
class Image {
 public:
  Image(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    check_dims(width, height);
    if (fill < 0.0 || fill > 1.0)
      throw std::invalid_argument("Image: fill intensity outside [0, 1]");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  static Image from_data(int width, int height, std::vector<double> values) {
    check_dims(width, height);
    if (values.size() != static_cast<std::size_t>(width) * height)
      throw std::invalid_argument("Image: data length does not match width * height");
    for (double v : values)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("Image: intensity outside [0, 1]");
    Image img;
    img.width_ = width;
    img.height_ = height;
    img.data_ = std::move(values);
    return img;
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return data_.size(); }

  // Bounds-checked access.
  double at(int x, int y) const {
    if (x < 0 || x >= width_ || y < 0 || y >= height_)
      throw std::out_of_range("Image::at: (" + std::to_string(x) + ", " +
                              std::to_string(y) + ") outside " +
                              std::to_string(width_) + "x" + std::to_string(height_));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  // Unchecked access for hot loops; caller guarantees coordinates are valid.
  double operator()(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> pixels() const noexcept { return data_; }

  bool same_dimensions(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  Image() = default;

  static void check_dims(int width, int height) {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("Image: dimensions must be positive");
    if (static_cast<long long>(width) * height > 100'000'000LL)
      throw std::invalid_argument("Image: dimensions unreasonably large");
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// How a 3x3 window resolves neighbors that fall outside the image:
//   replicate - clamp the coordinate to the nearest edge pixel
//   mirror    - reflect about the edge pixel (the edge itself is not repeated)
//   skip      - substitute the window's center value, which makes the missing
//               neighbor trivially similar and weight-neutral
enum class BorderPolicy { replicate, mirror, skip };

struct Window3x3 {
  std::array<double, 9> values{};  // row-major; values[4] is the center pixel
  int center_x = 0;
  int center_y = 0;
};

namespace detail {

inline int clamp_index(int i, int n) noexcept {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

// Reflect about the edge pixel without repeating it: -1 -> 1, n -> n-2.
// Degenerate axes (n == 1) fall back to the only valid index.
inline int mirror_index(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    else i = 2 * n - 2 - i;
  }
  return i;
}

}  // namespace detail

inline Window3x3 window_at(const Image& img, int x, int y,
                           BorderPolicy policy = BorderPolicy::replicate) {
  if (x < 0 || x >= img.width() || y < 0 || y >= img.height())
    throw std::out_of_range("window_at: center (" + std::to_string(x) + ", " +
                            std::to_string(y) + ") outside image");
  Window3x3 w;
  w.center_x = x;
  w.center_y = y;
  const double center = img(x, y);
  int k = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx, ++k) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (nx >= 0 && nx < img.width() && ny >= 0 && ny < img.height()) {
        w.values[k] = img(nx, ny);
        continue;
      }
      switch (policy) {
        case BorderPolicy::replicate:
          w.values[k] = img(detail::clamp_index(nx, img.width()),
                            detail::clamp_index(ny, img.height()));
          break;
        case BorderPolicy::mirror:
          w.values[k] = img(detail::mirror_index(nx, img.width()),
                            detail::mirror_index(ny, img.height()));
          break;
        case BorderPolicy::skip:
          w.values[k] = center;
          break;
      }
    }
  }
  return w;
}

}  // namespace gnf
