#pragma once

#include <string>
#include <string_view>

#include "lrl0/admm.hpp"
#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/lowrank.hpp"
#include "lrl0/manifest.hpp"
#include "lrl0/noise.hpp"
#include "lrl0/pwmf.hpp"

namespace lrl0 {

enum class Method { pwmf, plr, admm };
enum class Emit { u, v };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::pwmf: return "pwmf";
    case Method::plr: return "plr";
    case Method::admm: return "admm";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "pwmf") return Method::pwmf;
  if (s == "plr") return Method::plr;
  if (s == "admm") return Method::admm;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + std::string(s) + "'");
}

inline const char* to_string(NoiseKind k) {
  return k == NoiseKind::impulse_uniform ? "impulse" : "gaussian";
}

inline NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "impulse") return NoiseKind::impulse_uniform;
  if (s == "gaussian") return NoiseKind::gaussian;
  throw Error(ErrorCode::invalid_argument, "unknown noise kind '" + std::string(s) + "'");
}

/// Everything that determines the output of one denoising run.
struct DenoiseOptions {
  Method method = Method::admm;
  AdmmConfig admm;  // geometry, t, alpha, iterations (t and geometry also drive plr)
  PwmfParams pwmf;
  Emit emit = Emit::v;
  unsigned threads = 0;
};

inline GrayImage denoise(const GrayImage& noisy, const DenoiseOptions& opts) {
  switch (opts.method) {
    case Method::pwmf: {
      PwmfParams p = opts.pwmf;
      p.threads = opts.threads;
      return pwmf(noisy, p);
    }
    case Method::plr: {
      PlrConfig cfg = PlrConfig::with_threshold(opts.admm.t, opts.admm.geometry);
      cfg.threads = opts.threads;
      return plr_denoise(noisy, cfg);
    }
    case Method::admm: {
      PwmfParams p = opts.pwmf;
      p.threads = opts.threads;
      AdmmConfig cfg = opts.admm;
      cfg.threads = opts.threads;
      const GrayImage init = pwmf(noisy, p);
      const AdmmState s = run_admm_state(noisy, cfg, init);
      return opts.emit == Emit::v ? s.v : s.u;
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown method");
}

inline void record(RunManifest& m, const DenoiseOptions& o) {
  m.set("method", to_string(o.method));
  m.set("emit", o.emit == Emit::v ? "v" : "u");
  m.set("admm.alpha", o.admm.alpha);
  m.set("admm.t", o.admm.t);
  m.set("admm.iterations", o.admm.iterations);
  m.set("admm.mu", o.admm.mu());
  m.set("geometry.patch_size", o.admm.geometry.patch_size);
  m.set("geometry.window_size", o.admm.geometry.window_size);
  m.set("geometry.group_size", o.admm.geometry.group_size);
  m.set("geometry.stride", o.admm.geometry.stride);
  m.set("pwmf.road_neighbors", o.pwmf.road_neighbors);
  m.set("pwmf.road_scale", o.pwmf.road_scale);
  m.set("pwmf.patch_side", o.pwmf.patch_side);
  m.set("pwmf.search_side", o.pwmf.search_side);
  m.set("pwmf.patch_scale", o.pwmf.patch_scale);
  m.set("pwmf.passes", o.pwmf.passes);
}

inline DenoiseOptions denoise_options_from(const RunManifest& m) {
  DenoiseOptions o;
  o.method = parse_method(m.get("method"));
  o.emit = m.get("emit") == "u" ? Emit::u : Emit::v;
  o.admm.alpha = m.get_real("admm.alpha");
  o.admm.t = m.get_real("admm.t");
  o.admm.iterations = static_cast<int>(m.get_int("admm.iterations"));
  o.admm.geometry.patch_size = static_cast<int>(m.get_int("geometry.patch_size"));
  o.admm.geometry.window_size = static_cast<int>(m.get_int("geometry.window_size"));
  o.admm.geometry.group_size = static_cast<int>(m.get_int("geometry.group_size"));
  o.admm.geometry.stride = static_cast<int>(m.get_int("geometry.stride"));
  o.pwmf.road_neighbors = static_cast<int>(m.get_int("pwmf.road_neighbors"));
  o.pwmf.road_scale = m.get_real("pwmf.road_scale");
  o.pwmf.patch_side = static_cast<int>(m.get_int("pwmf.patch_side"));
  o.pwmf.search_side = static_cast<int>(m.get_int("pwmf.search_side"));
  o.pwmf.patch_scale = m.get_real("pwmf.patch_scale");
  o.pwmf.passes = static_cast<int>(m.get_int("pwmf.passes"));
  return o;
}

inline void record(RunManifest& m, const NoiseSpec& s) {
  m.set("noise.kind", to_string(s.kind));
  m.set("noise.p", s.p);
  m.set("noise.sigma", s.sigma);
  m.set("noise.lo", s.lo);
  m.set("noise.hi", s.hi);
  m.set("noise.seed", s.seed);
  m.set("seed", s.seed);
}

inline NoiseSpec noise_spec_from(const RunManifest& m) {
  NoiseSpec s;
  s.kind = parse_noise_kind(m.get("noise.kind"));
  s.p = m.get_real("noise.p");
  s.sigma = m.get_real("noise.sigma");
  s.lo = m.get_real("noise.lo");
  s.hi = m.get_real("noise.hi");
  s.seed = m.get_uint("noise.seed");
  return s;
}

}  // namespace lrl0
