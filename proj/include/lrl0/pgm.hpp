#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"

namespace lrl0 {

namespace detail {

class PgmCursor {
 public:
  explicit PgmCursor(std::string_view data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const auto ch = static_cast<unsigned char>(data_[pos_]);
      if (std::isspace(ch)) {
        ++pos_;
      } else if (ch == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  /// Next whitespace-delimited unsigned integer, or -1 at end of input.
  long long next_uint(ErrorCode on_garbage) {
    skip_space_and_comments();
    if (pos_ >= data_.size()) return -1;
    long long value = 0;
    std::size_t digits = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      value = value * 10 + (data_[pos_] - '0');
      if (value > (1LL << 40)) throw Error(on_garbage, "integer too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0 ||
        (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])) &&
         data_[pos_] != '#'))
      throw Error(on_garbage, "expected an unsigned integer");
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::string_view data() const noexcept { return data_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes a P2 (ASCII) or P5 (binary) PGM with maxval 255.
inline GrayImage decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw Error(ErrorCode::malformed_header, "not a P2/P5 PGM file");
  const bool binary = bytes[1] == '5';
  detail::PgmCursor cur(bytes);
  cur.advance(2);
  if (cur.remaining() == 0 || !std::isspace(static_cast<unsigned char>(bytes[2])))
    throw Error(ErrorCode::malformed_header, "missing whitespace after magic number");
  const long long width = cur.next_uint(ErrorCode::malformed_header);
  const long long height = cur.next_uint(ErrorCode::malformed_header);
  const long long maxval = cur.next_uint(ErrorCode::malformed_header);
  if (width <= 0 || height <= 0 || maxval < 0)
    throw Error(ErrorCode::malformed_header, "missing or zero PGM dimensions");
  if (width > (1LL << 20) || height > (1LL << 20))
    throw Error(ErrorCode::malformed_header, "PGM dimensions too large");
  if (maxval != 255)
    throw Error(ErrorCode::unsupported_maxval,
                "maxval " + std::to_string(maxval) + " unsupported, expected 255");
  const auto count = static_cast<std::size_t>(width * height);
  std::vector<double> pixels(count);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (cur.remaining() == 0) throw Error(ErrorCode::truncated_data, "missing raster");
    cur.advance(1);
    if (cur.remaining() < count)
      throw Error(ErrorCode::truncated_data, "expected " + std::to_string(count) +
                                                 " raster bytes, found " +
                                                 std::to_string(cur.remaining()));
    for (std::size_t i = 0; i < count; ++i)
      pixels[i] = static_cast<unsigned char>(bytes[cur.pos() + i]);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long long v = cur.next_uint(ErrorCode::malformed_data);
      if (v < 0)
        throw Error(ErrorCode::truncated_data, "expected " + std::to_string(count) +
                                                   " samples, found " + std::to_string(i));
      if (v > 255) throw Error(ErrorCode::malformed_data, "sample exceeds maxval");
      pixels[i] = static_cast<double>(v);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

/// Export quantization: clamp to [0,255], round half up.
inline std::uint8_t quantize(double v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

inline GrayImage quantized(const GrayImage& img) {
  GrayImage out = img;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = quantize(out[i]);
  return out;
}

inline std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.reserve(out.size() + img.size());
  for (std::size_t i = 0; i < img.size(); ++i) out.push_back(static_cast<char>(quantize(img[i])));
  return out;
}

inline GrayImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::io, "read failed: " + path.string());
  return decode_pgm(bytes);
}

/// Writes binary PGM. Only the .pgm/.pnm extensions (or none) are accepted.
inline void write_image(const GrayImage& img, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (!ext.empty() && ext != ".pgm" && ext != ".pnm")
    throw Error(ErrorCode::io, "unsupported output format '" + ext + "', use .pgm");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  const std::string bytes = encode_pgm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "write failed: " + path.string());
}

}  // namespace lrl0
