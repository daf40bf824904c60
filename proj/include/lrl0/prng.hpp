#pragma once

#include <cstdint>
#include <string_view>

namespace lrl0 {

/// SplitMix64 generator. The output stream is a pure function of the seed,
/// which keeps synthesized noise bit-identical across platforms.
class Prng {
 public:
  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

  explicit constexpr Prng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  constexpr std::uint64_t next() noexcept {
    state_ += golden;
    return mix(state_);
  }

  /// Uniform double in [0,1) built from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Folds a byte string into a 64-bit seed: h <- mix(h + golden + byte) per byte.
constexpr std::uint64_t hash_seed(std::string_view bytes) noexcept {
  std::uint64_t h = 0;
  for (unsigned char c : bytes) h = Prng::mix(h + Prng::golden + c);
  return h;
}

}  // namespace lrl0
