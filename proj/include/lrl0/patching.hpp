#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"

namespace lrl0 {

/// Patch side, search window side, group size and reference-grid step.
struct PatchGeometry {
  int patch_size = 7;
  int window_size = 43;
  int group_size = 245;
  int stride = 4;

  int patch_area() const noexcept { return patch_size * patch_size; }

  void validate() const {
    if (patch_size < 1 || window_size < 1 || group_size < 1 || stride < 1)
      throw Error(ErrorCode::geometry, "patch geometry fields must be positive");
    if (window_size < patch_size)
      throw Error(ErrorCode::geometry, "search window M=" + std::to_string(window_size) +
                                           " is smaller than patch side d=" +
                                           std::to_string(patch_size));
    const long long candidates =
        static_cast<long long>(window_size - patch_size + 1) * (window_size - patch_size + 1);
    if (group_size > candidates)
      throw Error(ErrorCode::geometry,
                  "group size m=" + std::to_string(group_size) + " exceeds (M-d+1)^2=" +
                      std::to_string(candidates) + " candidates in the search window");
  }
};

namespace detail {

inline std::vector<int> grid_axis(int length, int patch, int stride) {
  std::vector<int> axis;
  const int last = length - patch;
  for (int v = 0; v <= last; v += stride) axis.push_back(v);
  if (axis.back() != last) axis.push_back(last);
  return axis;
}

}  // namespace detail

/// Top-left corners of the reference patches: a regular grid with step
/// `stride`, with the last row and column pinned to the image border so every
/// pixel is covered.
inline std::vector<Position> reference_grid(int width, int height, const PatchGeometry& geom) {
  if (geom.patch_size < 1 || geom.stride < 1)
    throw Error(ErrorCode::geometry, "patch side and stride must be positive");
  if (width < geom.patch_size || height < geom.patch_size)
    throw Error(ErrorCode::geometry, "image " + std::to_string(width) + "x" +
                                         std::to_string(height) +
                                         " is smaller than patch side d=" +
                                         std::to_string(geom.patch_size));
  const auto rows = detail::grid_axis(height, geom.patch_size, geom.stride);
  const auto cols = detail::grid_axis(width, geom.patch_size, geom.stride);
  std::vector<Position> grid;
  grid.reserve(rows.size() * cols.size());
  for (int r : rows)
    for (int c : cols) grid.push_back({r, c});
  return grid;
}

/// Inclusive range of candidate top-left coordinates along one axis: patches
/// fully inside both the image and the window centred on the reference patch.
struct CandidateRange {
  int first = 0;
  int last = -1;

  int count() const noexcept { return last >= first ? last - first + 1 : 0; }
};

inline CandidateRange candidate_range(int ref, int length, const PatchGeometry& geom) {
  const int centre = ref + (geom.patch_size - 1) / 2;
  const int lo = std::max(0, centre - (geom.window_size - 1) / 2);
  const int hi = std::min(length - 1, centre - (geom.window_size - 1) / 2 + geom.window_size - 1);
  return {lo, hi - geom.patch_size + 1};
}

inline double patch_distance_sq(const GrayImage& img, Position a, Position b, int d) {
  double acc = 0.0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const double diff = img(a.row + r, a.col + c) - img(b.row + r, b.col + c);
      acc += diff * diff;
    }
  }
  return acc;
}

inline bool patch_inside(const GrayImage& img, Position p, int d) noexcept {
  return p.row >= 0 && p.col >= 0 && p.row + d <= img.height() && p.col + d <= img.width();
}

/// The `group_size` patches most similar to the reference in squared
/// Euclidean distance. The reference comes first; the rest are ordered by
/// distance with ties broken by raster order of the candidate.
inline std::vector<Position> block_match(const GrayImage& guide, Position ref,
                                         const PatchGeometry& geom) {
  const int d = geom.patch_size;
  if (!patch_inside(guide, ref, d))
    throw Error(ErrorCode::geometry, "reference patch lies outside the image");
  const CandidateRange rows = candidate_range(ref.row, guide.height(), geom);
  const CandidateRange cols = candidate_range(ref.col, guide.width(), geom);
  const long long available = static_cast<long long>(rows.count()) * cols.count();
  if (available < geom.group_size)
    throw Error(ErrorCode::geometry,
                "only " + std::to_string(available) + " candidate patches in the " +
                    std::to_string(geom.window_size) + "x" + std::to_string(geom.window_size) +
                    " window at (" + std::to_string(ref.row) + "," + std::to_string(ref.col) +
                    "), group size m=" + std::to_string(geom.group_size) + " required");

  struct Candidate {
    double dist;
    int row;
    int col;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(available));
  for (int r = rows.first; r <= rows.last; ++r) {
    for (int c = cols.first; c <= cols.last; ++c) {
      if (r == ref.row && c == ref.col) continue;
      candidates.push_back({patch_distance_sq(guide, ref, {r, c}, d), r, c});
    }
  }
  const auto keep = static_cast<std::size_t>(geom.group_size - 1);
  auto less = [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), less);

  std::vector<Position> members;
  members.reserve(static_cast<std::size_t>(geom.group_size));
  members.push_back(ref);
  for (std::size_t i = 0; i < keep; ++i) members.push_back({candidates[i].row, candidates[i].col});
  return members;
}

/// Stacks the d x d patches at `members` as columns, each patch vectorized in
/// column-major order.
inline Eigen::MatrixXd build_similarity_matrix(const GrayImage& img,
                                               std::span<const Position> members, int d) {
  Eigen::MatrixXd out(d * d, static_cast<Eigen::Index>(members.size()));
  for (std::size_t j = 0; j < members.size(); ++j) {
    const Position p = members[j];
    if (!patch_inside(img, p, d))
      throw Error(ErrorCode::geometry, "patch at (" + std::to_string(p.row) + "," +
                                           std::to_string(p.col) + ") is out of bounds");
    auto col = out.col(static_cast<Eigen::Index>(j));
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) col(c * d + r) = img(p.row + r, p.col + c);
  }
  return out;
}

struct SimilarityGroup {
  Position ref;
  std::vector<Position> members;
  Eigen::MatrixXd matrix;
  int patch_size = 0;
};

/// Matches on `guide`, reads pixel values from `img`.
inline SimilarityGroup make_group(const GrayImage& guide, const GrayImage& img, Position ref,
                                  const PatchGeometry& geom) {
  require_same_shape(guide, img, "make_group");
  SimilarityGroup g;
  g.ref = ref;
  g.patch_size = geom.patch_size;
  g.members = block_match(guide, ref, geom);
  g.matrix = build_similarity_matrix(img, g.members, geom.patch_size);
  return g;
}

/// Per-pixel accumulator of overlapping patch estimates. Holds a running mean
/// rather than a raw sum so that identical contributions reproduce their value
/// exactly.
class AggregationBuffer {
 public:
  AggregationBuffer(int width, int height)
      : width_(width),
        height_(height),
        mean_(static_cast<std::size_t>(width) * height, 0.0),
        count_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  void add(int row, int col, double value) noexcept {
    const std::size_t i = static_cast<std::size_t>(row) * width_ + col;
    const std::uint32_t n = ++count_[i];
    mean_[i] += (value - mean_[i]) / n;
  }

  std::uint32_t count(int row, int col) const noexcept {
    return count_[static_cast<std::size_t>(row) * width_ + col];
  }
  double mean(int row, int col) const noexcept {
    return mean_[static_cast<std::size_t>(row) * width_ + col];
  }
  double sum(int row, int col) const noexcept { return mean(row, col) * count(row, col); }

  std::span<const std::uint32_t> counts() const noexcept { return count_; }
  std::span<const double> means() const noexcept { return mean_; }

 private:
  int width_;
  int height_;
  std::vector<double> mean_;
  std::vector<std::uint32_t> count_;
};

/// Adds every column of `denoised` back at its member's location.
inline void scatter_group(const SimilarityGroup& group, const Eigen::MatrixXd& denoised,
                          AggregationBuffer& buf) {
  const int d = group.patch_size;
  if (denoised.rows() != d * d ||
      denoised.cols() != static_cast<Eigen::Index>(group.members.size()))
    throw Error(ErrorCode::dimension_mismatch, "denoised matrix does not match the group shape");
  for (std::size_t j = 0; j < group.members.size(); ++j) {
    const Position p = group.members[j];
    const auto col = denoised.col(static_cast<Eigen::Index>(j));
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) buf.add(p.row + r, p.col + c, col(c * d + r));
  }
}

inline GrayImage finalize(const AggregationBuffer& buf) {
  GrayImage out(buf.width(), buf.height());
  const auto counts = buf.counts();
  const auto means = buf.means();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0)
      throw Error(ErrorCode::coverage,
                  "pixel (" + std::to_string(i / static_cast<std::size_t>(buf.width())) + "," +
                      std::to_string(i % static_cast<std::size_t>(buf.width())) +
                      ") received no patch estimate");
    out[i] = means[i];
  }
  return out;
}

}  // namespace lrl0
