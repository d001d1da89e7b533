#pragma once

#include <cmath>
#include <utility>

#include "confirm/error.hpp"

namespace confirm {

/// A probability in [0, 1]. Construction validates the range, so any
/// function accepting a Probability can rely on it.
class Probability {
 public:
  constexpr Probability() = default;
  // Implicit on purpose: call sites read `std_normal_quantile(0.975)`.
  Probability(double value) : value_(value) {  // NOLINT(google-explicit-constructor)
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("probability outside [0, 1]");
    }
  }

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }  // NOLINT

 private:
  double value_ = 0.0;
};

namespace numerics {

double normal_pdf(double x);

/// Lower-tail standard normal CDF.
double normal_cdf(double x);

/// Lower quantile: returns x with normal_cdf(x) == p. Throws DomainError
/// unless 0 < p < 1.
double std_normal_quantile(Probability p);

/// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double x, int df);

/// Lower quantile of Student's t with `df` degrees of freedom.
double student_t_quantile(Probability p, int df);

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
/// Infinite limits are accepted.
double bvn_cdf(double h, double k, double rho);

/// Bracketed root of a scalar function: bisection with secant steps.
///
/// Requires f(lo) and f(hi) to differ in sign (a zero at either end is
/// returned directly). On return the final bracket is no wider than `tol`,
/// unless the bracket has collapsed to adjacent doubles.
template <class F>
double solve_root(F&& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("solve_root: tol must be positive");
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || std::signbit(flo) == std::signbit(fhi)) {
    throw BracketError("solve_root: no sign change on bracket");
  }

  int last_side = 0;
  bool force_bisect = false;
  for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    double x = mid;
    if (!force_bisect) {
      const double secant = hi - fhi * (hi - lo) / (fhi - flo);
      if (secant > lo && secant < hi) x = secant;
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    const int side = (std::signbit(fx) == std::signbit(flo)) ? -1 : 1;
    if (side < 0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // A secant step that keeps landing on one side stalls; bisect next.
    force_bisect = !force_bisect && side == last_side;
    last_side = side;
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace numerics
}  // namespace confirm
