#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace gramspec {

namespace detail {

// SplitMix64 output function; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Seed of a reproducible random stream: a user-chosen master key plus a
/// substream index. Substreams are derived by hashing, so any number of
/// consumers (trials, sequence elements) can draw independently of one
/// another and of evaluation order.
struct RngSeed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] RngSeed substream(std::uint64_t index) const noexcept {
    return {master, detail::mix64(stream + 0x9e3779b97f4a7c15ULL * (index + 1))};
  }

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// xoshiro256** seeded through SplitMix64. The integer stream and all
/// derived variates depend only on (master, stream), never on global
/// state, which is what makes seeded parallel runs schedule-independent.
class Rng {
 public:
  explicit Rng(RngSeed seed) noexcept {
    std::uint64_t sm = detail::mix64(seed.master ^ detail::rotl64(detail::mix64(seed.stream), 24));
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = detail::mix64(sm);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in {0, ..., bound-1}.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::uniform_below: bound must be positive");
    const std::uint64_t reject_below = (-bound) % bound;  // 2^64 mod bound
    std::uint64_t x = next();
    while (x < reject_below) x = next();
    return x % bound;
  }

  /// Standard normal variate (Box-Muller; consumes two words per pair).
  double gaussian() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double v = static_cast<double>(next() >> 11) * 0x1.0p-53;          // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gramspec
