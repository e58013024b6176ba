#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gramspec/mp_law.hpp"
#include "gramspec/spectrum.hpp"

namespace gramspec {

/// How closely an empirical spectrum follows a reference law.
struct FitReport {
  double ks_distance = 0.0;             // sup |empirical CDF - law CDF|, in [0, 1]
  double wasserstein1 = 0.0;            // mean quantile discrepancy
  double atom_fraction_empirical = 0.0; // zeros / K
  double support_min_positive = 0.0;    // smallest nonzero eigenvalue (0 if none)
  double support_max = 0.0;
  std::array<double, 3> moments_empirical{};  // first three raw moments
};

namespace detail {

inline double mp_quantile_bracketed(const MPLaw& law, double q, double lo_hint) {
  if (q <= mp_atom_weight(law)) return 0.0;
  const auto [a, b] = mp_support(law);
  if (q >= 1.0) return b;
  double lo = std::clamp(lo_hint, a, b);
  double hi = b;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (mp_cdf(law, mid) < q)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Kolmogorov-Smirnov distance between the empirical spectral CDF and the
/// mixed law CDF, taking both one-sided limits at every eigenvalue (and at
/// 0, where the law may carry an atom the data misses).
inline double ks_distance(const SpectralMeasure& s, const MPLaw& law) {
  std::vector<double> ascending(s.eigenvalues().rbegin(), s.eigenvalues().rend());
  const auto k = static_cast<double>(ascending.size());
  double sup = std::abs(mp_cdf(law, 0.0) -
                        static_cast<double>(s.zero_count()) / k);  // empirical CDF at 0
  std::size_t i = 0;
  while (i < ascending.size()) {
    std::size_t j = i;
    while (j < ascending.size() && ascending[j] == ascending[i]) ++j;
    const double f = mp_cdf(law, ascending[i]);
    // the law is continuous except at 0, where its left limit is 0
    const double f_left = ascending[i] == 0.0 ? 0.0 : f;
    sup = std::max(sup, std::abs(static_cast<double>(j) / k - f));
    sup = std::max(sup, std::abs(static_cast<double>(i) / k - f_left));
    i = j;
  }
  return std::min(sup, 1.0);
}

/// Mean absolute difference between empirical order statistics and law
/// quantiles at midpoint levels (i - 1/2)/K; the law quantiles come from
/// bisection on the mixed CDF.
inline double wasserstein1_distance(const SpectralMeasure& s, const MPLaw& law) {
  std::vector<double> ascending(s.eigenvalues().rbegin(), s.eigenvalues().rend());
  const auto k = static_cast<double>(ascending.size());
  double total = 0.0;
  double previous_quantile = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const double level = (static_cast<double>(i) + 0.5) / k;
    const double q = detail::mp_quantile_bracketed(law, level, previous_quantile);
    previous_quantile = q;
    total += std::abs(ascending[i] - q);
  }
  return total / k;
}

inline FitReport fit_spectrum(const SpectralMeasure& s, const MPLaw& law) {
  FitReport report;
  report.ks_distance = ks_distance(s, law);
  report.wasserstein1 = wasserstein1_distance(s, law);
  report.atom_fraction_empirical =
      static_cast<double>(s.zero_count()) / static_cast<double>(s.count());
  report.support_min_positive = s.min_positive();
  report.support_max = s.max();
  for (int p = 0; p < 3; ++p) {
    double sum = 0.0;
    for (double value : s.eigenvalues()) sum += std::pow(value, p + 1);
    report.moments_empirical[static_cast<std::size_t>(p)] =
        sum / static_cast<double>(s.count());
  }
  return report;
}

/// Length of the observed spectral support, (max eigenvalue) minus (min
/// nonzero eigenvalue). Rank-one and all-zero spectra give 0.
inline double support_length_entropy(const SpectralMeasure& s) {
  const double smallest = s.min_positive();
  if (smallest == 0.0) return 0.0;
  return s.max() - smallest;
}

}  // namespace gramspec
