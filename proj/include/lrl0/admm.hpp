#pragma once

#include <cmath>
#include <functional>

#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/lowrank.hpp"
#include "lrl0/patching.hpp"

namespace lrl0 {

/// Parameters of the l0 + rank splitting. The rank weight mu is not an input:
/// it is tied to the PLR threshold through m t^2 = 2 mu / alpha.
struct AdmmConfig {
  double alpha = 1.0 / 72.0;
  double t = 7.5;
  PatchGeometry geometry;
  int iterations = 50;
  unsigned threads = 0;

  double mu() const noexcept {
    return static_cast<double>(geometry.group_size) * t * t * alpha / 2.0;
  }

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw Error(ErrorCode::invalid_argument, "alpha must be positive");
    if (!(t >= 0.0) || !std::isfinite(t))
      throw Error(ErrorCode::invalid_argument, "t must be >= 0");
    if (iterations < 0) throw Error(ErrorCode::invalid_argument, "iterations must be >= 0");
    geometry.validate();
    const double lhs = static_cast<double>(geometry.group_size) * t * t;
    const double rhs = 2.0 * mu() / alpha;
    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, lhs))
      throw Error(ErrorCode::invalid_argument, "coupling m t^2 = 2 mu / alpha violated");
  }

  PlrConfig plr() const {
    PlrConfig cfg = PlrConfig::with_threshold(t, geometry);
    cfg.threads = threads;
    return cfg;
  }
};

struct AdmmState {
  GrayImage u;
  GrayImage v;
  GrayImage b;
  int k = 0;
};

/// Closed-form l0 proximal step: keep the observation where the prediction
/// v + b is within sqrt(2/alpha) of it, otherwise take the prediction.
inline GrayImage u_update(const GrayImage& v0, const GrayImage& v, const GrayImage& b,
                          double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
  require_same_shape(v0, v, "u_update");
  require_same_shape(v0, b, "u_update");
  const double radius = std::sqrt(2.0 / alpha);
  GrayImage u(v0.width(), v0.height());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double pred = v[i] + b[i];
    u[i] = std::abs(pred - v0[i]) < radius ? v0[i] : pred;
  }
  return u;
}

/// Rank subproblem, solved as a PLR pass on u - b that also matches on u - b.
inline GrayImage v_update(const GrayImage& u_next, const GrayImage& b, const AdmmConfig& cfg) {
  GrayImage target = u_next - b;
  PlrConfig plr = cfg.plr();
  plr.guide = target;
  return plr_denoise(target, plr);
}

inline GrayImage b_update(const GrayImage& b, const GrayImage& v_next, const GrayImage& u_next) {
  require_same_shape(b, v_next, "b_update");
  require_same_shape(b, u_next, "b_update");
  GrayImage out(b.width(), b.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = b[i] + (v_next[i] - u_next[i]);
  return out;
}

using AdmmObserver = std::function<void(const AdmmState&)>;

/// Runs the fixed number of iterations from v = init, b = 0 and returns the
/// whole state. `observer`, when set, sees the state after every iteration.
inline AdmmState run_admm_state(const GrayImage& v0, const AdmmConfig& cfg, const GrayImage& init,
                                const AdmmObserver& observer = {}) {
  cfg.validate();
  require_same_shape(v0, init, "run_admm init");
  AdmmState s{init, init, GrayImage(v0.width(), v0.height(), 0.0), 0};
  for (; s.k < cfg.iterations;) {
    s.u = u_update(v0, s.v, s.b, cfg.alpha);
    s.v = v_update(s.u, s.b, cfg);
    s.b = b_update(s.b, s.v, s.u);
    ++s.k;
    if (observer) observer(s);
  }
  return s;
}

/// Final low-rank iterate v^K.
inline GrayImage run_admm(const GrayImage& v0, const AdmmConfig& cfg, const GrayImage& init) {
  return run_admm_state(v0, cfg, init).v;
}

}  // namespace lrl0
