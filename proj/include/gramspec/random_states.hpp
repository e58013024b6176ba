#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gramspec/rng.hpp"
#include "gramspec/states.hpp"

namespace gramspec {

/// An N x N unitary, validated to U U^dagger = I within 1e-10 entrywise.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
      throw std::invalid_argument("UnitaryMatrix: entries must form a nonempty square matrix");
    if (!entries_.allFinite())
      throw std::invalid_argument("UnitaryMatrix: entries must be finite");
    const Eigen::MatrixXcd defect =
        entries_ * entries_.adjoint() - Eigen::MatrixXcd::Identity(entries_.rows(), entries_.cols());
    if (defect.cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("UnitaryMatrix: U U^dagger deviates from identity beyond 1e-10");
  }

  [[nodiscard]] Eigen::Index dim() const noexcept { return entries_.rows(); }
  [[nodiscard]] const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

  [[nodiscard]] ProjectiveState apply(const ProjectiveState& state) const {
    if (state.dim() != dim())
      throw std::invalid_argument("UnitaryMatrix::apply: dimension mismatch");
    return ProjectiveState(entries_ * state.amplitudes());
  }

 private:
  Eigen::MatrixXcd entries_;
};

namespace detail {

inline Eigen::VectorXcd gaussian_vector(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    v[i] = Complex(re, im);
  }
  return v;
}

}  // namespace detail

/// A ray distributed uniformly (Haar) on projective space: normalize a
/// vector of 2*dim independent standard Gaussians read as dim complex
/// amplitudes. Rotation invariance of the Gaussian makes the resulting
/// ray exactly uniform.
inline ProjectiveState sample_uniform_state(Eigen::Index dim, RngSeed seed) {
  if (dim < 1) throw std::invalid_argument("sample_uniform_state: dim must be at least 1");
  Rng rng(seed);
  Eigen::VectorXcd v = detail::gaussian_vector(dim, rng);
  while (!(v.norm() > 0.0)) v = detail::gaussian_vector(dim, rng);
  return ProjectiveState(std::move(v));
}

/// K independent uniform states. State j draws from substream(j) of the
/// given seed, so the result does not depend on evaluation order.
inline StateSequence sample_state_sequence(Eigen::Index dim, std::size_t count, RngSeed seed) {
  if (count < 1) throw std::invalid_argument("sample_state_sequence: count must be at least 1");
  std::vector<ProjectiveState> states;
  states.reserve(count);
  for (std::size_t j = 0; j < count; ++j)
    states.push_back(sample_uniform_state(dim, seed.substream(j)));
  return StateSequence(std::move(states));
}

/// Haar-distributed unitary: QR-orthonormalize a complex Ginibre matrix
/// and fix phases so the triangular factor has positive real diagonal.
inline UnitaryMatrix sample_haar_unitary(Eigen::Index dim, RngSeed seed) {
  if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim must be at least 1");
  Rng rng(seed);
  Eigen::MatrixXcd ginibre(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) ginibre.col(j) = detail::gaussian_vector(dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    const Complex phase = mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return UnitaryMatrix(std::move(q));
}

}  // namespace gramspec
