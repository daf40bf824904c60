#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/prng.hpp"

namespace lrl0 {

enum class NoiseKind { impulse_uniform, gaussian };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::impulse_uniform;
  double p = 0.0;
  double sigma = 0.0;
  double lo = 0.0;
  double hi = 255.0;
  std::uint64_t seed = 0;

  static NoiseSpec impulse(double p, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::impulse_uniform;
    s.p = p;
    s.seed = seed;
    return s;
  }

  static NoiseSpec gaussian(double sigma, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::gaussian;
    s.sigma = sigma;
    s.seed = seed;
    return s;
  }

  void validate() const {
    if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "noise range requires lo < hi");
    if (kind == NoiseKind::impulse_uniform && !(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::invalid_argument, "impulse proportion p must lie in [0,1]");
    if (kind == NoiseKind::gaussian && !(sigma >= 0.0))
      throw Error(ErrorCode::invalid_argument, "gaussian sigma must be >= 0");
  }
};

/// Random-valued impulse noise. Each pixel, in raster order, draws u1; when
/// u1 < p a second draw picks an integer level uniformly from [lo, hi].
inline GrayImage add_impulse_noise(const GrayImage& img, const NoiseSpec& spec) {
  spec.validate();
  if (spec.kind != NoiseKind::impulse_uniform)
    throw Error(ErrorCode::invalid_argument, "add_impulse_noise needs an impulse spec");
  Prng rng(spec.seed);
  const double levels = std::floor(spec.hi - spec.lo) + 1.0;
  GrayImage out = img;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.uniform() < spec.p) {
      const double v = spec.lo + std::floor(rng.uniform() * levels);
      out[i] = std::clamp(v, spec.lo, spec.hi);
    }
  }
  return out;
}

/// Additive white Gaussian noise via Box-Muller, one deviate per pixel. No
/// clamping.
inline GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec) {
  spec.validate();
  if (spec.kind != NoiseKind::gaussian)
    throw Error(ErrorCode::invalid_argument, "add_gaussian_noise needs a gaussian spec");
  Prng rng(spec.seed);
  GrayImage out = img;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u1 = 1.0 - rng.uniform();  // (0,1]
    const double u2 = rng.uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    out[i] += spec.sigma * z;
  }
  return out;
}

inline GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec) {
  return spec.kind == NoiseKind::impulse_uniform ? add_impulse_noise(img, spec)
                                                 : add_gaussian_noise(img, spec);
}

/// Log-likelihood of observing `samples` at a pixel whose clean value is `u`
/// under the discrete 256-level impulse model with proportion p.
inline double impulse_log_likelihood(std::span<const int> samples, int u, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::invalid_argument, "likelihood requires p in (0,1)");
  if (samples.empty())
    throw Error(ErrorCode::invalid_argument, "likelihood requires at least one sample");
  const auto n = static_cast<double>(samples.size());
  const auto hits = static_cast<double>(std::count(samples.begin(), samples.end(), u));
  return hits * std::log(1.0 - p + p / 256.0) + (n - hits) * std::log(p / 256.0);
}

/// Maximum-likelihood clean value: the sample mode, smallest value on ties.
/// The result does not depend on p.
inline int mle_pixel(std::span<const int> samples, double /*p*/ = 0.5) {
  if (samples.empty())
    throw Error(ErrorCode::invalid_argument, "mle_pixel requires at least one sample");
  std::array<int, 256> hist{};
  for (int s : samples) {
    if (s < 0 || s > 255) throw Error(ErrorCode::invalid_argument, "sample outside 0..255");
    ++hist[static_cast<std::size_t>(s)];
  }
  return static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
}

}  // namespace lrl0
