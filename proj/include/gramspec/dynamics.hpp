#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gramspec/random_states.hpp"
#include "gramspec/rng.hpp"
#include "gramspec/states.hpp"

namespace gramspec {

/// One period of a kicked quantum evolution.
class FloquetOperator {
 public:
  explicit FloquetOperator(UnitaryMatrix unitary) : unitary_(std::move(unitary)) {}

  [[nodiscard]] Eigen::Index dim() const noexcept { return unitary_.dim(); }
  [[nodiscard]] const UnitaryMatrix& unitary() const noexcept { return unitary_; }

 private:
  UnitaryMatrix unitary_;
};

/// The orbit sequence (p0, u p0, ..., u^{K-1} p0). Each step renormalizes
/// to absorb rounding drift, which keeps the Gram diagonal at 1 over long
/// runs.
inline StateSequence evolve_sequence(const FloquetOperator& op, const ProjectiveState& initial,
                                     std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("evolve_sequence: steps must be at least 1");
  if (initial.dim() != op.dim())
    throw std::invalid_argument("evolve_sequence: dimension mismatch between operator and state");
  std::vector<ProjectiveState> states;
  states.reserve(steps);
  states.push_back(initial);
  for (std::size_t t = 1; t < steps; ++t) states.push_back(op.unitary().apply(states.back()));
  return StateSequence(std::move(states));
}

/// Kicked-model family D2 * F^dagger * D1 * F with F the unitary discrete
/// Fourier transform, D1 = diag(exp(i*kick*cos(2 pi j / N))) and
/// D2 = diag(exp(i*rotation*j(j+1)/N)). kick = rotation = 0 gives the
/// identity; generic parameters give tunably irregular dynamics.
inline FloquetOperator build_phase_kick_operator(Eigen::Index dim, double kick_strength,
                                                 double rotation) {
  if (dim < 2) throw std::invalid_argument("build_phase_kick_operator: dim must be at least 2");
  if (!std::isfinite(kick_strength) || !std::isfinite(rotation))
    throw std::invalid_argument("build_phase_kick_operator: parameters must be finite");
  const auto n = static_cast<double>(dim);
  Eigen::MatrixXcd fourier(dim, dim);
  const double scale = 1.0 / std::sqrt(n);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(k) / n;
      fourier(j, k) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  Eigen::VectorXcd kick_phases(dim);
  Eigen::VectorXcd rotation_phases(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double v = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / n);
    const double w = static_cast<double>(j) * static_cast<double>(j + 1) / n;
    kick_phases[j] = Complex(std::cos(kick_strength * v), std::sin(kick_strength * v));
    rotation_phases[j] = Complex(std::cos(rotation * w), std::sin(rotation * w));
  }
  Eigen::MatrixXcd u = rotation_phases.asDiagonal() *
                       (fourier.adjoint() * (kick_phases.asDiagonal() * fourier));
  return FloquetOperator(UnitaryMatrix(std::move(u)));
}

/// A bijection of {0, ..., N-1}.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    if (map_.empty()) throw std::invalid_argument("Permutation: size must be at least 1");
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t image : map_) {
      if (image >= map_.size() || seen[image])
        throw std::invalid_argument("Permutation: map is not a bijection of 0..N-1");
      seen[image] = true;
    }
  }

  static Permutation identity(std::size_t size) {
    std::vector<std::size_t> map(size);
    for (std::size_t i = 0; i < size; ++i) map[i] = i;
    return Permutation(std::move(map));
  }

  /// Uniformly random permutation (Fisher-Yates over the seeded stream).
  static Permutation random(std::size_t size, RngSeed seed) {
    std::vector<std::size_t> map(size);
    for (std::size_t i = 0; i < size; ++i) map[i] = i;
    Rng rng(seed);
    for (std::size_t i = size; i > 1; --i)
      std::swap(map[i - 1], map[rng.uniform_below(i)]);
    return Permutation(std::move(map));
  }

  [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }
  [[nodiscard]] std::size_t operator()(std::size_t i) const { return map_.at(i); }
  [[nodiscard]] const std::vector<std::size_t>& map() const noexcept { return map_; }

 private:
  std::vector<std::size_t> map_;
};

/// The cycle containing `start`, listed from start; its length is the
/// period of start under the permutation.
inline std::vector<std::size_t> permutation_orbit(const Permutation& perm, std::size_t start) {
  if (start >= perm.size())
    throw std::invalid_argument("permutation_orbit: start index out of range");
  std::vector<std::size_t> orbit{start};
  for (std::size_t next = perm(start); next != start; next = perm(next)) orbit.push_back(next);
  return orbit;
}

/// Cycle-length multiset, sorted ascending; lengths sum to N.
inline std::vector<std::size_t> cycle_type(const Permutation& perm) {
  std::vector<bool> visited(perm.size(), false);
  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (visited[i]) continue;
    std::size_t length = 0;
    for (std::size_t j = i; !visited[j]; j = perm(j)) {
      visited[j] = true;
      ++length;
    }
    lengths.push_back(length);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

/// The orbit sequence (start, pi(start), pi^2(start), ...) truncated or
/// wrapped to exactly `steps` entries.
inline std::vector<std::size_t> permutation_word(const Permutation& perm, std::size_t start,
                                                 std::size_t steps) {
  if (start >= perm.size())
    throw std::invalid_argument("permutation_word: start index out of range");
  if (steps < 1) throw std::invalid_argument("permutation_word: steps must be at least 1");
  std::vector<std::size_t> word;
  word.reserve(steps);
  std::size_t current = start;
  for (std::size_t t = 0; t < steps; ++t) {
    word.push_back(current);
    current = perm(current);
  }
  return word;
}

}  // namespace gramspec
