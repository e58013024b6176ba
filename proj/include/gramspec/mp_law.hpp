#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gramspec {

/// The limiting spectral law of Gram matrices of K = tau*N uniform states
/// as N grows: for tau > 1 an atom at 0 of weight (tau-1)/tau plus an
/// absolutely continuous part rho of weight 1/tau; for tau <= 1 the
/// continuous part alone carries weight 1. rho is the Marchenko-Pastur
/// density with ratio tau, supported on [(sqrt(tau)-1)^2, (sqrt(tau)+1)^2].
class MPLaw {
 public:
  explicit MPLaw(double tau) : tau_(tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
      throw std::invalid_argument("MPLaw: tau must be positive and finite");
  }

  [[nodiscard]] double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

struct SupportInterval {
  double lower = 0.0;
  double upper = 0.0;
};

inline double mp_atom_weight(const MPLaw& law) noexcept {
  return std::max(0.0, (law.tau() - 1.0) / law.tau());
}

/// Endpoints of the continuous support; upper - lower = 4 sqrt(tau).
inline SupportInterval mp_support(const MPLaw& law) noexcept {
  const double root = std::sqrt(law.tau());
  return {(root - 1.0) * (root - 1.0), (root + 1.0) * (root + 1.0)};
}

/// rho(x) = sqrt((x-a)(b-x)) / (2 pi tau x) inside (a, b), 0 outside.
inline double mp_density(const MPLaw& law, double x) noexcept {
  const auto [a, b] = mp_support(law);
  if (!(x > a && x < b)) return 0.0;
  return std::sqrt((x - a) * (b - x)) / (2.0 * std::numbers::pi * law.tau() * x);
}

namespace detail {

// rho(x) dx after the substitution x = a + (b-a) sin^2(u), which removes
// the square-root endpoint behaviour and the x^{-1/2} singularity at
// tau = 1: the transformed integrand is smooth on [0, pi/2].
inline double mp_density_in_u(const MPLaw& law, double u) noexcept {
  const auto [a, b] = mp_support(law);
  const double sin_u = std::sin(u);
  const double x = a + (b - a) * sin_u * sin_u;
  if (x == 0.0) return (b - a) / (std::numbers::pi * law.tau());  // u = 0 limit when a = 0
  const double sin_2u = std::sin(2.0 * u);
  return (b - a) * (b - a) * sin_2u * sin_2u / (4.0 * std::numbers::pi * law.tau() * x);
}

template <typename Fn>
double adaptive_simpson_step(const Fn& f, double lo, double hi, double f_lo, double f_mid,
                             double f_hi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double left_mid = 0.5 * (lo + mid);
  const double right_mid = 0.5 * (mid + hi);
  const double f_lm = f(left_mid);
  const double f_rm = f(right_mid);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_step(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
template <typename Fn>
double adaptive_simpson(const Fn& f, double lo, double hi, double tol, int max_depth = 48) {
  if (!(hi > lo)) return 0.0;
  const double f_lo = f(lo);
  const double f_mid = f(0.5 * (lo + hi));
  const double f_hi = f(hi);
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  return adaptive_simpson_step(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, max_depth);
}

/// Integral of rho over (a, min(x, b)] by quadrature in the u variable.
inline double mp_continuous_mass_below(const MPLaw& law, double x, double tol) {
  const auto [a, b] = mp_support(law);
  if (!(x > a)) return 0.0;
  const double upper_u =
      x >= b ? 0.5 * std::numbers::pi : std::asin(std::sqrt((x - a) / (b - a)));
  return adaptive_simpson([&law](double u) { return mp_density_in_u(law, u); }, 0.0, upper_u,
                          tol);
}

}  // namespace detail

/// Mixed CDF: atom weight at 0 plus the integral of the density up to x,
/// evaluated by adaptive quadrature with absolute tolerance 1e-8.
inline double mp_cdf(const MPLaw& law, double x) {
  if (!(x >= 0.0)) return 0.0;
  const double mass = mp_atom_weight(law) + detail::mp_continuous_mass_below(law, x, 1e-8);
  return std::min(mass, 1.0);
}

namespace detail {

inline double binomial(int n, int r) noexcept {
  if (r < 0 || r > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= r; ++i) result = result * static_cast<double>(n - r + i) / i;
  return result;
}

}  // namespace detail

/// k-th moment of the law: sum_{r=0}^{k-1} tau^r C(k,r) C(k-1,r) / (r+1)
/// (a Narayana-weighted polynomial in tau; k = 1 gives 1, k = 2 gives
/// 1 + tau, k = 3 gives 1 + 3 tau + tau^2).
inline double mp_moment(const MPLaw& law, int order) {
  if (order < 1 || order > 12)
    throw std::invalid_argument("mp_moment: order must lie in [1, 12]");
  double sum = 0.0;
  double tau_power = 1.0;
  for (int r = 0; r < order; ++r) {
    sum += tau_power * detail::binomial(order, r) * detail::binomial(order - 1, r) /
           static_cast<double>(r + 1);
    tau_power *= law.tau();
  }
  return sum;
}

/// Generalized inverse of mp_cdf by bisection to width 1e-8. Quantiles at
/// or below the atom weight map to 0.
inline double mp_quantile(const MPLaw& law, double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("mp_quantile: q must lie in [0, 1]");
  if (q <= mp_atom_weight(law)) return 0.0;
  const auto [a, b] = mp_support(law);
  if (q >= 1.0) return b;
  double lo = a;
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

}  // namespace gramspec
