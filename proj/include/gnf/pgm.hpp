#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnf/image.hpp"

namespace gnf {

// Thrown on malformed PGM input; carries the byte offset of the defect.
class PgmError : public std::runtime_error {
 public:
  PgmError(std::size_t byte_offset, const std::string& what)
      : std::runtime_error("pgm parse error at byte " + std::to_string(byte_offset) +
                           ": " + what),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

namespace detail {

struct PgmCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  bool eof() const noexcept { return pos >= bytes.size(); }
  std::uint8_t peek() const noexcept { return bytes[pos]; }

  static bool is_space(std::uint8_t c) noexcept {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
  }

  // PGM headers allow '#' comments running to end of line between tokens.
  void skip_space_and_comments() {
    while (!eof()) {
      if (is_space(peek())) {
        ++pos;
      } else if (peek() == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else {
        return;
      }
    }
  }

  struct Token {
    long value;
    std::size_t offset;  // where the integer's first digit sits
  };

  Token read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos;
    if (eof() || peek() < '0' || peek() > '9')
      throw PgmError(start, std::string("expected unsigned integer (") + what + ")");
    long value = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      if (value > 1'000'000'000L)
        throw PgmError(start, std::string(what) + " is out of range");
      ++pos;
    }
    return {value, start};
  }
};

}  // namespace detail

// Reads binary (P5) or ASCII (P2) grayscale PGM with maxval up to 255.
// Raw sample values are normalized to [0, 1] by dividing by maxval.
inline Image load_pgm(std::span<const std::uint8_t> bytes) {
  detail::PgmCursor cur{bytes};
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw PgmError(0, "bad magic, expected \"P5\" or \"P2\"");
  const bool binary = bytes[1] == '5';
  cur.pos = 2;

  const auto width_tok = cur.read_uint("width");
  const auto height_tok = cur.read_uint("height");
  const long width = width_tok.value;
  const long height = height_tok.value;
  if (width <= 0) throw PgmError(width_tok.offset, "width must be positive");
  if (height <= 0) throw PgmError(height_tok.offset, "height must be positive");
  if (width * height > 100'000'000L)
    throw PgmError(width_tok.offset, "image dimensions unreasonably large");

  const auto maxval_tok = cur.read_uint("maxval");
  const long maxval = maxval_tok.value;
  if (maxval < 1 || maxval > 255)
    throw PgmError(maxval_tok.offset,
                   "maxval must be in [1, 255], got " + std::to_string(maxval));

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> data(count);

  if (binary) {
    // Exactly one whitespace byte separates the header from the payload.
    if (cur.eof() || !detail::PgmCursor::is_space(cur.peek()))
      throw PgmError(cur.pos, "expected single whitespace before binary payload");
    ++cur.pos;
    if (bytes.size() - cur.pos < count)
      throw PgmError(bytes.size(),
                     "truncated pixel data: expected " + std::to_string(count) +
                         " bytes, have " + std::to_string(bytes.size() - cur.pos));
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint8_t raw = bytes[cur.pos + i];
      if (raw > maxval)
        throw PgmError(cur.pos + i, "sample value " + std::to_string(raw) +
                                        " exceeds maxval " + std::to_string(maxval));
      data[i] = static_cast<double>(raw) / static_cast<double>(maxval);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto sample = cur.read_uint("sample");
      if (sample.value > maxval)
        throw PgmError(sample.offset, "sample value " + std::to_string(sample.value) +
                                          " exceeds maxval " + std::to_string(maxval));
      data[i] = static_cast<double>(sample.value) / static_cast<double>(maxval);
    }
  }
  return Image::from_data(static_cast<int>(width), static_cast<int>(height),
                          std::move(data));
}

// Writes binary (P5) PGM. Intensities quantize as round(i * maxval), half up.
inline std::vector<std::uint8_t> save_pgm(const Image& img, int maxval = 255) {
  if (maxval < 1 || maxval > 255)
    throw std::invalid_argument("save_pgm: maxval must be in [1, 255]");
  std::string header = "P5\n" + std::to_string(img.width()) + " " +
                       std::to_string(img.height()) + "\n" +
                       std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.pixel_count());
  for (double v : img.pixels()) {
    long q = std::lround(v * maxval);
    if (q < 0) q = 0;
    if (q > maxval) q = maxval;
    out.push_back(static_cast<std::uint8_t>(q));
  }
  return out;
}

inline Image load_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_pgm(bytes);
}

inline void save_pgm_file(const std::filesystem::path& path, const Image& img,
                          int maxval = 255) {
  const std::vector<std::uint8_t> bytes = save_pgm(img, maxval);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace gnf
