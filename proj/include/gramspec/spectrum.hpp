#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gramspec/gram.hpp"

namespace gramspec {

/// The multiset of eigenvalues of a Gram matrix, sorted descending.
/// Eigenvalues below the zero threshold 1e-10*K are clamped to exactly 0:
/// the atom at zero is exact in theory (rank deficiency) and comes back
/// from floating-point eigensolvers as O(eps*K) noise.
class SpectralMeasure {
 public:
  explicit SpectralMeasure(std::vector<double> eigenvalues)
      : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty())
      throw std::invalid_argument("SpectralMeasure: at least one eigenvalue is required");
    const auto k = static_cast<double>(eigenvalues_.size());
    const double threshold = zero_threshold(eigenvalues_.size());
    for (double& value : eigenvalues_) {
      if (!std::isfinite(value))
        throw std::invalid_argument("SpectralMeasure: eigenvalues must be finite");
      if (value < -1e-9 * k)
        throw std::invalid_argument("SpectralMeasure: eigenvalue below the PSD tolerance -1e-9*K");
      if (value < threshold) value = 0.0;
    }
    std::sort(eigenvalues_.begin(), eigenvalues_.end(), std::greater<>());
  }

  static double zero_threshold(std::size_t count) noexcept {
    return 1e-10 * static_cast<double>(count);
  }

  [[nodiscard]] std::size_t count() const noexcept { return eigenvalues_.size(); }
  [[nodiscard]] const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  [[nodiscard]] double operator[](std::size_t i) const { return eigenvalues_[i]; }

  [[nodiscard]] double sum() const noexcept {
    double total = 0.0;
    for (double value : eigenvalues_) total += value;
    return total;
  }

  [[nodiscard]] double mean() const noexcept {
    return sum() / static_cast<double>(eigenvalues_.size());
  }

  [[nodiscard]] double max() const noexcept { return eigenvalues_.front(); }

  /// Smallest nonzero eigenvalue; 0 when the measure is entirely atomic.
  [[nodiscard]] double min_positive() const noexcept {
    double smallest = 0.0;
    for (double value : eigenvalues_) {
      if (value > 0.0) smallest = value;  // sorted descending: last positive wins
    }
    return smallest;
  }

  [[nodiscard]] std::size_t zero_count() const noexcept {
    std::size_t zeros = 0;
    for (double value : eigenvalues_)
      if (value == 0.0) ++zeros;
    return zeros;
  }

 private:
  std::vector<double> eigenvalues_;
};

/// All K eigenvalues of a Gram matrix via a dense Hermitian eigensolver.
/// Any solver meeting the residual bound ||Gv - lambda v|| <= 1e-8 ||G||
/// satisfies the contract; this one delegates to Eigen's self-adjoint
/// solver (tridiagonalization + implicit QL).
inline SpectralMeasure hermitian_spectrum(const GramMatrix& g) {
  const double asymmetry = (g.entries() - g.entries().adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10)
    throw std::invalid_argument("hermitian_spectrum: input is not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_spectrum: eigensolver did not converge");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  return SpectralMeasure(std::move(values));
}

struct RankInfo {
  std::size_t rank = 0;
  std::size_t zeros = 0;
};

/// Rank and zero multiplicity of a spectrum after clamping. For a Gram
/// matrix of K states in dimension N, rank <= min(K, N).
inline RankInfo rank_and_zero_count(const SpectralMeasure& s) {
  const std::size_t zeros = s.zero_count();
  return RankInfo{s.count() - zeros, zeros};
}

}  // namespace gramspec
