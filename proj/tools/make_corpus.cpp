// Regenerates the synthetic desk corpus shipped under data/corpus: a fixed,
// seeded set of structure-dense grayscale test images (checkers, bar and ring
// gratings, block mosaics, rectangle collages). Fine piecewise-constant
// structure stands in for the texture of natural photographs, which the 3x3
// box filters in this project are sensitive to. The output is deterministic,
// so rerunning reproduces the same PGM bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnf/image.hpp"
#include "gnf/noise.hpp"
#include "gnf/pgm.hpp"

namespace {

using Painter = std::function<double(int x, int y, int size)>;

gnf::Image paint(int size, const Painter& f) {
  std::vector<double> data(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      data[static_cast<std::size_t>(y) * size + x] =
          std::clamp(f(x, y, size), 0.0, 1.0);
  return gnf::Image::from_data(size, size, std::move(data));
}

int rand_int(std::uint64_t& state, int lo, int hi) {  // inclusive bounds
  return lo + static_cast<int>(gnf::detail::splitmix64(state) %
                               static_cast<std::uint64_t>(hi - lo + 1));
}

// Blocks of a regular grid, each painted one palette level.
gnf::Image mosaic(int size, int block, std::uint64_t seed,
                  const std::vector<double>& palette) {
  std::uint64_t state = seed;
  const int nb = (size + block - 1) / block;
  std::vector<double> levels(static_cast<std::size_t>(nb) * nb);
  for (double& l : levels)
    l = palette[rand_int(state, 0, static_cast<int>(palette.size()) - 1)];
  std::vector<double> data(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      data[static_cast<std::size_t>(y) * size + x] =
          levels[static_cast<std::size_t>(y / block) * nb + x / block];
  return gnf::Image::from_data(size, size, std::move(data));
}

// Many small axis-aligned rectangles over a mid-gray base.
gnf::Image rect_collage(int size, std::uint64_t seed) {
  static constexpr double palette[3] = {0.1, 0.55, 1.0};
  std::vector<double> data(static_cast<std::size_t>(size) * size, 0.5);
  std::uint64_t state = seed;
  for (int r = 0; r < 120; ++r) {
    const int x0 = rand_int(state, 0, size - 2);
    const int y0 = rand_int(state, 0, size - 2);
    const int w = rand_int(state, 2, 5);
    const int h = rand_int(state, 2, 5);
    const double level = palette[rand_int(state, 0, 2)];
    for (int y = y0; y < std::min(size, y0 + h); ++y)
      for (int x = x0; x < std::min(size, x0 + w); ++x)
        data[static_cast<std::size_t>(y) * size + x] = level;
  }
  return gnf::Image::from_data(size, size, std::move(data));
}

struct Entry {
  std::string name;
  std::function<gnf::Image(int)> make;
};

std::vector<Entry> corpus_entries() {
  auto painted = [](Painter f) {
    return [f = std::move(f)](int size) { return paint(size, f); };
  };
  std::vector<Entry> entries;
  entries.push_back({"checker3_a", painted([](int x, int y, int) {
                       return (x / 3 + y / 3) % 2 ? 0.85 : 0.15;
                     })});
  entries.push_back({"checker3_b", painted([](int x, int y, int) {
                       return (x / 3 + y / 3) % 2 ? 0.8 : 0.2;
                     })});
  entries.push_back({"checker3_c", painted([](int x, int y, int) {
                       return (x / 3 + y / 3) % 2 ? 0.75 : 0.25;
                     })});
  entries.push_back({"checker3_d", painted([](int x, int y, int) {
                       return (x / 3 + y / 3) % 2 ? 0.83 : 0.17;
                     })});
  entries.push_back({"checker4_a", painted([](int x, int y, int) {
                       return (x / 4 + y / 4) % 2 ? 0.85 : 0.15;
                     })});
  entries.push_back({"checker4_b", painted([](int x, int y, int) {
                       return (x / 4 + y / 4) % 2 ? 0.75 : 0.15;
                     })});
  entries.push_back({"checker4_c", painted([](int x, int y, int) {
                       return (x / 4 + y / 4) % 2 ? 0.78 : 0.2;
                     })});
  entries.push_back({"bars_v3_a", painted([](int x, int, int) {
                       return (x / 3) % 2 ? 0.82 : 0.18;
                     })});
  entries.push_back({"bars_v3_b", painted([](int x, int, int) {
                       return (x / 3) % 2 ? 0.8 : 0.15;
                     })});
  entries.push_back({"bars_h3", painted([](int, int y, int) {
                       return (y / 3) % 2 ? 0.78 : 0.2;
                     })});
  entries.push_back({"grid4", painted([](int x, int y, int) {
                       return (x % 4 < 2 || y % 4 < 2) ? 0.85 : 0.15;
                     })});
  entries.push_back({"grid6", painted([](int x, int y, int) {
                       return (x % 6 < 2 || y % 6 < 2) ? 0.8 : 0.15;
                     })});
  entries.push_back({"diag3", painted([](int x, int y, int) {
                       return ((x + y) / 3) % 2 ? 0.82 : 0.18;
                     })});
  entries.push_back({"diag4", painted([](int x, int y, int) {
                       return ((x + y) / 4) % 2 ? 0.85 : 0.18;
                     })});
  entries.push_back({"mosaic3_a", [](int size) {
                       return mosaic(size, 3, 0xA88CE, {0.1, 0.55, 1.0});
                     }});
  entries.push_back({"mosaic3_b", [](int size) {
                       return mosaic(size, 3, 0xB88CE, {0.12, 0.56, 0.99});
                     }});
  entries.push_back({"mosaic4_a", [](int size) {
                       return mosaic(size, 4, 0xA99CE, {0.1, 0.55, 1.0});
                     }});
  entries.push_back({"mosaic4_b", [](int size) {
                       return mosaic(size, 4, 0xB11CE, {0.12, 0.56, 0.99});
                     }});
  entries.push_back({"mosaic5", [](int size) {
                       return mosaic(size, 5, 0xAAACE, {0.12, 0.57, 0.97});
                     }});
  entries.push_back({"collage_a", [](int size) { return rect_collage(size, 0xBEEF01); }});
  entries.push_back({"collage_b", [](int size) { return rect_collage(size, 0xBEEF02); }});
  entries.push_back({"rings3_a", painted([](int x, int y, int s) {
                       const double r = std::hypot(x - s / 2.0, y - s / 2.0);
                       return static_cast<int>(r / 3) % 2 ? 0.82 : 0.18;
                     })});
  entries.push_back({"rings3_b", painted([](int x, int y, int s) {
                       const double r = std::hypot(x - s / 2.0, y - s / 2.0);
                       return static_cast<int>(r / 3) % 2 ? 0.78 : 0.22;
                     })});
  entries.push_back({"zigzag3", painted([](int x, int y, int) {
                       const int phase = (x + (y % 6 < 3 ? y : 5 - y % 6)) / 3;
                       return phase % 2 ? 0.83 : 0.17;
                     })});
  return entries;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the deterministic synthetic desk corpus"};
  std::string out_dir;
  int size = 64;
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--size", size, "image side length in pixels")
      ->check(CLI::Range(16, 1024));
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    int index = 0;
    for (const Entry& e : corpus_entries()) {
      char prefix[16];
      std::snprintf(prefix, sizeof(prefix), "%02d_", ++index);
      const std::filesystem::path path =
          std::filesystem::path(out_dir) / (prefix + e.name + ".pgm");
      gnf::save_pgm_file(path, e.make(size));
      std::cout << path.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
