#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gramspec/classical_words.hpp"
#include "gramspec/dynamics.hpp"
#include "gramspec/gram.hpp"
#include "gramspec/spectrum.hpp"

using namespace gramspec;

TEST_CASE("multiplicities counts letters exactly") {
  const MultiplicityProfile p = multiplicities(ClassicalWord({1, 1, 2}, 3));
  CHECK(p.counts.at(1) == 2);
  CHECK(p.counts.at(2) == 1);
  CHECK(p.distinct == 2);

  const MultiplicityProfile constant = multiplicities(ClassicalWord({4, 4, 4, 4, 4}, 6));
  CHECK(constant.counts.at(4) == 5);
  CHECK(constant.distinct == 1);

  const MultiplicityProfile distinct = multiplicities(ClassicalWord({0, 1, 2, 3}, 4));
  for (const auto& [letter, count] : distinct.counts) CHECK(count == 1);
}

TEST_CASE("ClassicalWord validates its letters") {
  CHECK_THROWS_AS(ClassicalWord({0, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(ClassicalWord({}, 3), std::invalid_argument);
  CHECK_THROWS_AS(ClassicalWord({0}, 0), std::invalid_argument);
}

TEST_CASE("word_gram_spectrum lists each multiplicity once plus zeros") {
  const SpectralMeasure s = word_gram_spectrum(ClassicalWord({1, 1, 2}, 3));
  CHECK(s.eigenvalues() == std::vector<double>{2.0, 1.0, 0.0});

  const SpectralMeasure distinct = word_gram_spectrum(ClassicalWord({0, 1, 2, 3, 4}, 5));
  CHECK(distinct.eigenvalues() == std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0});

  const SpectralMeasure constant = word_gram_spectrum(ClassicalWord({2, 2, 2, 2, 2}, 3));
  CHECK(constant.eigenvalues() == std::vector<double>{5.0, 0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("the exact word spectrum matches the numeric eigensolve of the basis Gram") {
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    Rng rng({trial, 321});
    const std::size_t n = 2 + rng.uniform_below(20);
    const std::size_t k = 1 + rng.uniform_below(30);
    const ClassicalWord word = sample_uniform_word(n, k, {trial, 654});
    const auto exact = word_gram_spectrum(word).eigenvalues();
    const auto numeric = hermitian_spectrum(build_gram(to_state_sequence(word))).eigenvalues();
    REQUIRE(exact.size() == numeric.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
      CHECK(std::abs(exact[i] - numeric[i]) <= 1e-9);
  }
}

TEST_CASE("the nonzero spectrum is the multiplicity multiset, zeros count the rest") {
  const ClassicalWord word = sample_uniform_word(12, 40, {5, 5});
  const MultiplicityProfile profile = multiplicities(word);
  const SpectralMeasure s = word_gram_spectrum(word);

  std::vector<double> nonzero;
  for (double v : s.eigenvalues())
    if (v != 0.0) nonzero.push_back(v);
  std::vector<double> expected;
  for (const auto& [letter, count] : profile.counts)
    expected.push_back(static_cast<double>(count));
  std::sort(expected.begin(), expected.end(), std::greater<>());
  CHECK(nonzero == expected);

  CHECK(s.zero_count() == 40 - profile.distinct);
  for (double v : s.eigenvalues()) CHECK(v == std::floor(v));  // integers only
}

TEST_CASE("permutation words of injective length give the flat spectrum") {
  const Permutation perm = Permutation::random(20, {31, 0});
  const std::size_t period = permutation_orbit(perm, 4).size();
  const auto word = permutation_word(perm, 4, period);
  const SpectralMeasure s = word_gram_spectrum(ClassicalWord(word, 20));
  for (double v : s.eigenvalues()) CHECK(v == 1.0);
}

TEST_CASE("a 3-cycle word of length 6 has spectrum {2, 2, 2, 0, 0, 0}") {
  const Permutation three_cycle(std::vector<std::size_t>{1, 2, 0});
  const auto word = permutation_word(three_cycle, 0, 6);
  const SpectralMeasure s = word_gram_spectrum(ClassicalWord(word, 3));
  CHECK(s.eigenvalues() == std::vector<double>{2.0, 2.0, 2.0, 0.0, 0.0, 0.0});
}

TEST_CASE("sample_uniform_word is deterministic per seed and respects N = 1") {
  const ClassicalWord a = sample_uniform_word(50, 200, {7, 7});
  const ClassicalWord b = sample_uniform_word(50, 200, {7, 7});
  CHECK(a.letters() == b.letters());

  const ClassicalWord constant = sample_uniform_word(1, 10, {0, 0});
  for (std::size_t letter : constant.letters()) CHECK(letter == 0);
}

TEST_CASE("vacancy fraction of a square word approaches 1/e") {
  const ClassicalWord word = sample_uniform_word(1000, 1000, {2023, 0});
  const MultiplicityProfile profile = multiplicities(word);
  const double absent =
      static_cast<double>(1000 - profile.distinct) / 1000.0;
  CHECK(std::abs(absent - std::exp(-1.0)) <= 0.01);
}

TEST_CASE("poisson_pmf matches the analytic values and sums to one") {
  CHECK(poisson_pmf(0, 1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(poisson_pmf(1, 1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(poisson_pmf(2, 2.0) == Catch::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(poisson_pmf(0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_pmf(0, 0.0), std::invalid_argument);

  for (double tau : {0.5, 1.0, 2.0, 5.0}) {
    double total = 0.0;
    const auto upto = static_cast<std::size_t>(20.0 * tau + 50.0);
    for (std::size_t k = 0; k <= upto; ++k) {
      total += poisson_pmf(k, tau);
      CHECK(total <= 1.0 + 1e-12);  // partial sums increase monotonically to 1
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("multiplicity_distribution covers vacant letters and sums to one") {
  const MultiplicityDistribution flat = multiplicity_distribution(ClassicalWord({0, 1, 2}, 3));
  CHECK(flat.pmf(1) == 1.0);
  CHECK(flat.pmf(0) == 0.0);

  const MultiplicityDistribution half = multiplicity_distribution(ClassicalWord({0, 0}, 2));
  CHECK(half.pmf(0) == 0.5);
  CHECK(half.pmf(2) == 0.5);
  CHECK(half.pmf(1) == 0.0);

  double total = 0.0;
  const MultiplicityDistribution d =
      multiplicity_distribution(sample_uniform_word(100, 250, {1, 1}));
  for (std::size_t k = 0; k <= d.max_multiplicity(); ++k) total += d.pmf(k);
  CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("multiplicities of a large square word follow Poisson(1)") {
  const ClassicalWord word = sample_uniform_word(10000, 10000, {11, 0});
  const MultiplicityDistribution dist = multiplicity_distribution(word);
  CHECK(total_variation_to_poisson(dist, 1.0) <= 0.02);
}
