#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/parallel.hpp"
#include "lrl0/patching.hpp"

namespace lrl0 {

/// Rank penalty m t^2 Rank(X); singular values at or below t sqrt(m) vanish.
struct RankPenalty {
  double t = 7.5;
  int group_size = 245;

  double cutoff() const noexcept { return t * std::sqrt(static_cast<double>(group_size)); }
};

struct LowRankEstimate {
  Eigen::MatrixXd matrix;
  int rank = 0;
};

/// Global minimizer of ||S - X||_F^2 + tau^2 Rank(X): keep the singular values
/// of S strictly above tau, zero the rest.
///
/// Singular pairs come from the eigendecomposition of the smaller Gram matrix
/// (S S^T or S^T S). The estimate is formed by projecting S onto the retained
/// singular subspace, or by removing the discarded one, whichever is smaller.
/// When every discarded singular value is numerically zero, S is returned
/// unchanged.
inline LowRankEstimate hard_threshold_rank(const Eigen::MatrixXd& S, double tau) {
  if (!S.allFinite()) throw Error(ErrorCode::non_finite, "similarity matrix has non-finite entries");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw Error(ErrorCode::invalid_argument, "threshold must be finite and >= 0");
  if (S.size() == 0) return {S, 0};

  const bool left = S.rows() <= S.cols();
  const Eigen::Index n = left ? S.rows() : S.cols();
  Eigen::MatrixXd gram(n, n);
  if (left)
    gram.noalias() = S * S.transpose();
  else
    gram.noalias() = S.transpose() * S;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::non_finite, "eigendecomposition of the Gram matrix failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = eig.eigenvectors();

  const double sigma_max = std::sqrt(std::max(lambda(n - 1), 0.0));
  const double zero_tol =
      sigma_max * std::sqrt(std::numeric_limits<double>::epsilon() *
                            static_cast<double>(std::max(S.rows(), S.cols())));

  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> dropped;
  bool drops_signal = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sigma = std::sqrt(std::max(lambda(i), 0.0));
    const bool numerically_zero = sigma <= zero_tol;
    if (sigma > tau && !numerically_zero) {
      kept.push_back(i);
    } else {
      dropped.push_back(i);
      drops_signal = drops_signal || !numerically_zero;
    }
  }
  const int rank = static_cast<int>(kept.size());
  if (!drops_signal) return {S, rank};
  if (kept.empty()) return {Eigen::MatrixXd::Zero(S.rows(), S.cols()), 0};

  const bool project_kept = kept.size() <= dropped.size();
  const auto& basis_idx = project_kept ? kept : dropped;
  Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(basis_idx.size()));
  for (std::size_t j = 0; j < basis_idx.size(); ++j)
    basis.col(static_cast<Eigen::Index>(j)) = vectors.col(basis_idx[j]);

  Eigen::MatrixXd part;
  if (left)
    part.noalias() = basis * (basis.transpose() * S);
  else
    part.noalias() = (S * basis) * basis.transpose();
  if (project_kept) return {std::move(part), rank};
  return {S - part, rank};
}

struct PlrConfig {
  PatchGeometry geometry;
  RankPenalty penalty;
  /// Image used for block matching; the denoised image itself when empty.
  std::optional<GrayImage> guide;
  /// Worker threads, 0 = hardware concurrency. Output does not depend on it.
  unsigned threads = 0;

  static PlrConfig with_threshold(double t, PatchGeometry geom = {}) {
    PlrConfig cfg;
    cfg.geometry = geom;
    cfg.penalty = {t, geom.group_size};
    return cfg;
  }
};

namespace detail {

// Groups per batch: computed in parallel, then scattered in grid order so the
// aggregation sums are identical for any thread count.
inline constexpr std::size_t plr_batch = 128;

}  // namespace detail

/// Patch-based low-rank denoising pass: group, hard-threshold, aggregate.
inline GrayImage plr_denoise(const GrayImage& img, const PlrConfig& cfg) {
  cfg.geometry.validate();
  if (cfg.penalty.group_size != cfg.geometry.group_size)
    throw Error(ErrorCode::invalid_argument, "rank penalty group size differs from the geometry");
  const GrayImage& guide = cfg.guide ? *cfg.guide : img;
  require_same_shape(guide, img, "plr_denoise guide");

  const auto grid = reference_grid(img.width(), img.height(), cfg.geometry);
  const double tau = cfg.penalty.cutoff();
  AggregationBuffer buf(img.width(), img.height());

  std::vector<SimilarityGroup> groups(detail::plr_batch);
  std::vector<Eigen::MatrixXd> estimates(detail::plr_batch);
  for (std::size_t start = 0; start < grid.size(); start += detail::plr_batch) {
    const std::size_t count = std::min(detail::plr_batch, grid.size() - start);
    parallel_for(count, cfg.threads, [&](std::size_t i) {
      groups[i] = make_group(guide, img, grid[start + i], cfg.geometry);
      estimates[i] = hard_threshold_rank(groups[i].matrix, tau).matrix;
    });
    for (std::size_t i = 0; i < count; ++i) scatter_group(groups[i], estimates[i], buf);
  }
  return finalize(buf);
}

}  // namespace lrl0
