#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gramspec {

using Complex = std::complex<double>;

/// A ray in projective Hilbert space, stored as one normalized
/// representative. Construction renormalizes, so callers may pass any
/// finite nonzero vector; all phase choices of the representative are
/// equivalent for every operation in this library.
class ProjectiveState {
 public:
  explicit ProjectiveState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1)
      throw std::invalid_argument("ProjectiveState: dimension must be at least 1");
    if (!amplitudes_.allFinite())
      throw std::invalid_argument("ProjectiveState: amplitudes must be finite");
    const double norm = amplitudes_.norm();
    if (!(norm > 0.0))
      throw std::invalid_argument("ProjectiveState: the zero vector spans no ray");
    amplitudes_ /= norm;
  }

  [[nodiscard]] Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

  static ProjectiveState basis_vector(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim)
      throw std::invalid_argument("ProjectiveState::basis_vector: index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[index] = Complex(1.0, 0.0);
    return ProjectiveState(std::move(v));
  }

 private:
  Eigen::VectorXcd amplitudes_;
};

/// Squared chordal distance between two rays: 2 - 2|<a,b>|, in [0, 2].
/// Symmetric, phase-invariant, and maximal (= 2) for orthogonal rays.
inline double projective_distance(const ProjectiveState& a, const ProjectiveState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("projective_distance: dimension mismatch between states");
  const double overlap = std::min(std::abs(a.amplitudes().dot(b.amplitudes())), 1.0);
  return std::clamp(2.0 - 2.0 * overlap, 0.0, 2.0);
}

/// An ordered sequence of K rays sharing one Hilbert-space dimension.
/// Immutable after construction; safe to share across threads.
class StateSequence {
 public:
  explicit StateSequence(std::vector<ProjectiveState> states) : states_(std::move(states)) {
    if (states_.empty())
      throw std::invalid_argument("StateSequence: at least one state is required");
    const Eigen::Index d = states_.front().dim();
    for (const auto& state : states_)
      if (state.dim() != d)
        throw std::invalid_argument("StateSequence: dimension mismatch within sequence");
  }

  [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
  [[nodiscard]] Eigen::Index dim() const noexcept { return states_.front().dim(); }
  [[nodiscard]] const ProjectiveState& operator[](std::size_t i) const { return states_[i]; }
  [[nodiscard]] const std::vector<ProjectiveState>& states() const noexcept { return states_; }

  /// K/N, the natural time scale of the sequence.
  [[nodiscard]] double tau() const noexcept {
    return static_cast<double>(size()) / static_cast<double>(dim());
  }

  [[nodiscard]] auto begin() const noexcept { return states_.begin(); }
  [[nodiscard]] auto end() const noexcept { return states_.end(); }

 private:
  std::vector<ProjectiveState> states_;
};

}  // namespace gramspec
