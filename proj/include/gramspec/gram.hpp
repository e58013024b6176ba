#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

#include "gramspec/states.hpp"

namespace gramspec {

/// K x K matrix of pairwise inner products <phi_i, phi_j>. Hermitian with
/// real diagonal exactly by construction; positive semidefinite whenever
/// it comes from an actual sequence of vectors.
class GramMatrix {
 public:
  /// Validates and adopts raw entries: square, finite, Hermitian within
  /// 1e-10 and unit diagonal within 1e-12. Entries are symmetrized so the
  /// stored matrix is Hermitian exactly.
  static GramMatrix from_entries(const Eigen::MatrixXcd& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
      throw std::invalid_argument("GramMatrix: entries must form a nonempty square matrix");
    if (!entries.allFinite())
      throw std::invalid_argument("GramMatrix: entries must be finite");
    const double asymmetry = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-10)
      throw std::invalid_argument("GramMatrix: input is not Hermitian within 1e-10");
    Eigen::MatrixXcd h = 0.5 * (entries + entries.adjoint());
    if ((h.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12)
      throw std::invalid_argument("GramMatrix: diagonal must be 1 within 1e-12");
    return GramMatrix(std::move(h));
  }

  [[nodiscard]] Eigen::Index size() const noexcept { return entries_.rows(); }
  [[nodiscard]] const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  [[nodiscard]] Complex entry(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  friend GramMatrix build_gram(const StateSequence& seq);

 private:
  explicit GramMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {}

  Eigen::MatrixXcd entries_;
};

inline GramMatrix build_gram(const StateSequence& seq) {
  const auto k = static_cast<Eigen::Index>(seq.size());
  Eigen::MatrixXcd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    g(i, i) = Complex(seq[i].amplitudes().squaredNorm(), 0.0);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const Complex z = seq[i].amplitudes().dot(seq[j].amplitudes());
      g(i, j) = z;
      g(j, i) = std::conj(z);
    }
  }
  return GramMatrix(std::move(g));
}

}  // namespace gramspec
