#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lrl0/error.hpp"

namespace lrl0 {

/// Pixel coordinate, top-left origin.
struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Row-major grayscale image with real-valued intensities.
///
/// Values nominally live in [0,255] but iterates may leave that range; only
/// finiteness is enforced at construction.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
    check_finite(fill);
  }

  GrayImage(int width, int height, std::vector<double> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
      throw Error(ErrorCode::dimension_mismatch,
                  "pixel count " + std::to_string(pixels_.size()) +
                      " does not match " + std::to_string(width) + "x" +
                      std::to_string(height));
    for (double v : pixels_) check_finite(v);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double& operator()(int row, int col) {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  double operator()(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  double& operator[](std::size_t i) { return pixels_[i]; }
  double operator[](std::size_t i) const { return pixels_[i]; }

  std::span<double> pixels() noexcept { return pixels_; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  bool same_shape(const GrayImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool contains(Position p) const noexcept {
    return p.row >= 0 && p.col >= 0 && p.row < height_ && p.col < width_;
  }

  /// Copy of the rectangle [top, top+h) x [left, left+w).
  GrayImage crop(int top, int left, int w, int h) const {
    if (top < 0 || left < 0 || w <= 0 || h <= 0 || top + h > height_ ||
        left + w > width_)
      throw Error(ErrorCode::invalid_argument, "crop outside image");
    GrayImage out(w, h);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) out(r, c) = (*this)(top + r, left + c);
    return out;
  }

  GrayImage center_crop(int w, int h) const {
    return crop((height_ - h) / 2, (width_ - w) / 2, w, h);
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  static void check_dims(int width, int height) {
    if (width <= 0 || height <= 0)
      throw Error(ErrorCode::invalid_argument, "image dimensions must be positive");
  }
  static void check_finite(double v) {
    if (!std::isfinite(v))
      throw Error(ErrorCode::non_finite, "image pixel is not finite");
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

inline void require_same_shape(const GrayImage& a, const GrayImage& b,
                               const char* what) {
  if (!a.same_shape(b))
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": image dimensions differ (" +
                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()) + ")");
}

/// Peak signal-to-noise ratio in dB, peak 255.
///
/// Returns +infinity (see `is_infinite_psnr`) when the two images are equal.
inline double psnr(const GrayImage& estimate, const GrayImage& reference) {
  require_same_shape(estimate, reference, "psnr");
  double sq = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double e = estimate[i] - reference[i];
    sq += e * e;
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  const double r = std::sqrt(static_cast<double>(estimate.size()));
  return 20.0 * std::log10(255.0 * r / std::sqrt(sq));
}

inline bool is_infinite_psnr(double db) noexcept { return std::isinf(db) && db > 0; }

/// Number of pixels where the two images differ exactly.
inline std::size_t l0_distance(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "l0_distance");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] != b[i]) ? 1 : 0;
  return n;
}

namespace detail {

template <class Op>
GrayImage elementwise(const GrayImage& a, const GrayImage& b, Op op,
                      const char* what) {
  require_same_shape(a, b, what);
  GrayImage out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

}  // namespace detail

inline GrayImage operator+(const GrayImage& a, const GrayImage& b) {
  return detail::elementwise(a, b, [](double x, double y) { return x + y; }, "add");
}

inline GrayImage operator-(const GrayImage& a, const GrayImage& b) {
  return detail::elementwise(a, b, [](double x, double y) { return x - y; }, "subtract");
}

}  // namespace lrl0
