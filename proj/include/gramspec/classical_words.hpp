#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gramspec/rng.hpp"
#include "gramspec/spectrum.hpp"
#include "gramspec/states.hpp"

namespace gramspec {

/// A length-K word over the alphabet {0, ..., N-1}. Identifying letter j
/// with the basis vector e_j makes the word a sequence of mutually
/// orthogonal-or-equal rays, whose Gram spectrum is known exactly.
class ClassicalWord {
 public:
  ClassicalWord(std::vector<std::size_t> letters, std::size_t alphabet_size)
      : letters_(std::move(letters)), alphabet_size_(alphabet_size) {
    if (letters_.empty()) throw std::invalid_argument("ClassicalWord: length must be at least 1");
    if (alphabet_size_ < 1)
      throw std::invalid_argument("ClassicalWord: alphabet size must be at least 1");
    for (std::size_t letter : letters_)
      if (letter >= alphabet_size_)
        throw std::invalid_argument("ClassicalWord: letter outside the alphabet");
  }

  [[nodiscard]] std::size_t length() const noexcept { return letters_.size(); }
  [[nodiscard]] std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  [[nodiscard]] const std::vector<std::size_t>& letters() const noexcept { return letters_; }

 private:
  std::vector<std::size_t> letters_;
  std::size_t alphabet_size_;
};

/// Letter counts m(j) of a word; multiplicities sum to K.
struct MultiplicityProfile {
  std::map<std::size_t, std::size_t> counts;
  std::size_t distinct = 0;
};

inline MultiplicityProfile multiplicities(const ClassicalWord& word) {
  MultiplicityProfile profile;
  for (std::size_t letter : word.letters()) ++profile.counts[letter];
  profile.distinct = profile.counts.size();
  return profile;
}

/// Exact Gram spectrum of a classical word, computed combinatorially:
/// grouping equal letters makes the Gram matrix block-diagonal in all-ones
/// blocks, so each distinct letter j contributes the eigenvalue m(j) once
/// and the eigenvalue 0 with multiplicity m(j) - 1.
inline SpectralMeasure word_gram_spectrum(const ClassicalWord& word) {
  std::vector<double> values;
  values.reserve(word.length());
  const MultiplicityProfile profile = multiplicities(word);
  for (const auto& [letter, count] : profile.counts) {
    values.push_back(static_cast<double>(count));
    for (std::size_t r = 1; r < count; ++r) values.push_back(0.0);
  }
  return SpectralMeasure(std::move(values));
}

/// The basis-vector sequence (e_{i(1)}, ..., e_{i(K)}) of a word, for
/// cross-checking the exact spectrum against the numeric eigensolver.
inline StateSequence to_state_sequence(const ClassicalWord& word) {
  std::vector<ProjectiveState> states;
  states.reserve(word.length());
  for (std::size_t letter : word.letters())
    states.push_back(ProjectiveState::basis_vector(
        static_cast<Eigen::Index>(word.alphabet_size()), static_cast<Eigen::Index>(letter)));
  return StateSequence(std::move(states));
}

/// K letters drawn independently and uniformly from {0, ..., N-1}.
inline ClassicalWord sample_uniform_word(std::size_t alphabet_size, std::size_t length,
                                         RngSeed seed) {
  if (alphabet_size < 1)
    throw std::invalid_argument("sample_uniform_word: alphabet size must be at least 1");
  if (length < 1) throw std::invalid_argument("sample_uniform_word: length must be at least 1");
  Rng rng(seed);
  std::vector<std::size_t> letters(length);
  for (std::size_t& letter : letters) letter = rng.uniform_below(alphabet_size);
  return ClassicalWord(std::move(letters), alphabet_size);
}

/// Poisson probability e^{-tau} tau^k / k!.
inline double poisson_pmf(std::size_t k, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("poisson_pmf: tau must be positive");
  return std::exp(-tau + static_cast<double>(k) * std::log(tau) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

/// Fraction of the N alphabet letters appearing exactly k times in the
/// word, for every k >= 0 (vacant letters included). For K = tau*N and
/// large N this converges to Poisson(tau).
struct MultiplicityDistribution {
  std::map<std::size_t, std::size_t> letter_counts;  // multiplicity -> number of letters
  std::size_t alphabet_size = 0;

  [[nodiscard]] double pmf(std::size_t k) const {
    const auto it = letter_counts.find(k);
    if (it == letter_counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(alphabet_size);
  }

  [[nodiscard]] std::size_t max_multiplicity() const noexcept {
    return letter_counts.empty() ? 0 : letter_counts.rbegin()->first;
  }
};

inline MultiplicityDistribution multiplicity_distribution(const ClassicalWord& word) {
  MultiplicityDistribution dist;
  dist.alphabet_size = word.alphabet_size();
  const MultiplicityProfile profile = multiplicities(word);
  for (const auto& [letter, count] : profile.counts) ++dist.letter_counts[count];
  const std::size_t vacant = word.alphabet_size() - profile.distinct;
  if (vacant > 0) dist.letter_counts[0] = vacant;
  return dist;
}

/// Total variation distance between a multiplicity distribution and
/// Poisson(tau), including the Poisson tail beyond the largest observed
/// multiplicity.
inline double total_variation_to_poisson(const MultiplicityDistribution& dist, double tau) {
  const auto tail = static_cast<std::size_t>(20.0 * tau + 50.0);
  const std::size_t upto = std::max(dist.max_multiplicity(), tail);
  double tv = 0.0;
  double poisson_mass = 0.0;
  for (std::size_t k = 0; k <= upto; ++k) {
    const double q = poisson_pmf(k, tau);
    poisson_mass += q;
    tv += std::abs(dist.pmf(k) - q);
  }
  tv += std::max(0.0, 1.0 - poisson_mass);  // Poisson mass beyond the summation range
  return 0.5 * tv;
}

}  // namespace gramspec
