#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/parallel.hpp"

namespace lrl0 {

/// ROAD-weighted patch mean used to build the ADMM starting image.
struct PwmfParams {
  int road_neighbors = 4;
  double road_scale = 40.0;
  int patch_side = 3;
  int search_side = 11;
  double patch_scale = 5.0;
  int passes = 2;
  unsigned threads = 0;

  void validate() const {
    if (road_neighbors < 1 || road_neighbors > 8)
      throw Error(ErrorCode::invalid_argument, "road_neighbors must lie in 1..8");
    if (!(road_scale > 0.0) || !(patch_scale > 0.0))
      throw Error(ErrorCode::invalid_argument, "pwmf bandwidths must be positive");
    if (patch_side < 1 || search_side < patch_side)
      throw Error(ErrorCode::invalid_argument, "pwmf requires 1 <= patch_side <= search_side");
    if (passes < 1) throw Error(ErrorCode::invalid_argument, "pwmf passes must be positive");
  }
};

namespace detail {

// Reflection about the border pixel (-1 -> 1, n -> n-2).
inline int mirror(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

inline double mirrored(const GrayImage& img, int r, int c) noexcept {
  return img(mirror(r, img.height()), mirror(c, img.width()));
}

}  // namespace detail

/// Rank-ordered absolute differences: sum of the `neighbors` smallest
/// |img(pos) - img(q)| over the 8-neighbourhood, borders mirrored.
inline double road(const GrayImage& img, Position pos, int neighbors = 4) {
  if (!img.contains(pos)) throw Error(ErrorCode::invalid_argument, "road position outside image");
  if (neighbors < 1 || neighbors > 8)
    throw Error(ErrorCode::invalid_argument, "road neighbors must lie in 1..8");
  std::array<double, 8> diffs{};
  std::size_t k = 0;
  const double centre = img(pos.row, pos.col);
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if (dr != 0 || dc != 0)
        diffs[k++] = std::abs(centre - detail::mirrored(img, pos.row + dr, pos.col + dc));
  std::partial_sort(diffs.begin(), diffs.begin() + neighbors, diffs.end());
  double sum = 0.0;
  for (int i = 0; i < neighbors; ++i) sum += diffs[static_cast<std::size_t>(i)];
  return sum;
}

inline std::vector<double> road_map(const GrayImage& img, int neighbors = 4) {
  std::vector<double> out(img.size());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      out[static_cast<std::size_t>(r) * img.width() + c] = road(img, {r, c}, neighbors);
  return out;
}

namespace detail {

inline GrayImage pwmf_pass(const GrayImage& img, const PwmfParams& params) {
  const int w = img.width();
  const int h = img.height();
  const auto roads = road_map(img, params.road_neighbors);
  std::vector<double> clean_weight(roads.size());
  const double road_den = 2.0 * params.road_scale * params.road_scale;
  for (std::size_t i = 0; i < roads.size(); ++i)
    clean_weight[i] = std::exp(-roads[i] * roads[i] / road_den);

  auto weight_at = [&](int r, int c) {
    return clean_weight[static_cast<std::size_t>(mirror(r, h)) * w + mirror(c, w)];
  };

  const int search_half = params.search_side / 2;
  const int patch_half = params.patch_side / 2;
  const double patch_den = 2.0 * params.patch_scale * params.patch_scale;

  GrayImage out(w, h);
  parallel_for(static_cast<std::size_t>(h), params.threads, [&](std::size_t row_index) {
    const int r = static_cast<int>(row_index);
    std::vector<double> window;
    for (int c = 0; c < w; ++c) {
      const int r0 = std::max(0, r - search_half), r1 = std::min(h - 1, r + search_half);
      const int c0 = std::max(0, c - search_half), c1 = std::min(w - 1, c + search_half);
      double num = 0.0, den = 0.0;
      double lo = img(r0, c0), hi = lo;
      for (int yr = r0; yr <= r1; ++yr) {
        for (int yc = c0; yc <= c1; ++yc) {
          const double v = img(yr, yc);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          double dist = 0.0, dist_w = 0.0;
          for (int kr = -patch_half; kr <= patch_half; ++kr) {
            for (int kc = -patch_half; kc <= patch_half; ++kc) {
              const double pw = weight_at(r + kr, c + kc) * weight_at(yr + kr, yc + kc);
              const double diff = mirrored(img, r + kr, c + kc) - mirrored(img, yr + kr, yc + kc);
              dist += pw * diff * diff;
              dist_w += pw;
            }
          }
          const double mean_sq = dist_w > 0.0 ? dist / dist_w : 0.0;
          const double wy = clean_weight[static_cast<std::size_t>(yr) * w + yc] *
                            std::exp(-mean_sq / patch_den);
          num += wy * v;
          den += wy;
        }
      }
      if (den < 1e-12) {
        window.clear();
        for (int yr = r0; yr <= r1; ++yr)
          for (int yc = c0; yc <= c1; ++yc) window.push_back(img(yr, yc));
        auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
        std::nth_element(window.begin(), mid, window.end());
        out(r, c) = *mid;
      } else {
        // Blend towards the observation by the pixel's own clean weight.
        const double keep = clean_weight[static_cast<std::size_t>(r) * w + c];
        const double mean = std::clamp(num / den, lo, hi);
        out(r, c) = keep * img(r, c) + (1.0 - keep) * mean;
      }
    }
  });
  return out;
}

}  // namespace detail

/// Impulse-robust weighted mean filter. Each pixel's search window is averaged
/// with weights exp(-ROAD(y)^2 / 2 s_r^2) * exp(-D(x,y) / 2 s_p^2), where D is a
/// ROAD-weighted mean squared patch difference, so likely impulses contribute
/// neither as samples nor to the patch comparison. The output is the blend
/// c(x) img(x) + (1 - c(x)) mean(x) with c(x) = exp(-ROAD(x)^2 / 2 s_r^2), which
/// leaves pixels that look clean essentially untouched. When all weights
/// vanish the (lower) window median is used. ROAD is recomputed every pass.
inline GrayImage pwmf(const GrayImage& img, const PwmfParams& params = {}) {
  params.validate();
  if (img.width() < params.search_side || img.height() < params.search_side)
    throw Error(ErrorCode::geometry, "image smaller than the pwmf search window");
  GrayImage current = img;
  for (int pass = 0; pass < params.passes; ++pass) current = detail::pwmf_pass(current, params);
  return current;
}

}  // namespace lrl0
