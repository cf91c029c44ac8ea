#pragma once

// Internal kernels shared by the distribution functions.

namespace siglab::dist::detail {

/// I_x(a, b) (or its complement) given both x and y = 1 - x, so callers that
/// know 1 - x to full precision do not lose it to cancellation.
double inc_beta(double x, double y, double a, double b, bool complement);

/// Solves cdf(x) = p on [lo, hi] where cdf(lo) - p and cdf(hi) - p bracket a
/// root. Brent's method to relative machine precision.
template <class Fn>
double brent_root(Fn&& fn, double lo, double hi, double flo, double fhi);

}  // namespace siglab::dist::detail

#include <cmath>
#include <limits>
#include <utility>

template <class Fn>
double siglab::dist::detail::brent_root(Fn&& fn, double lo, double hi, double flo, double fhi) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::min();
  double a = lo, b = hi, c = hi;
  double fa = flo, fb = fhi, fc = fhi;
  double d = b - a, e = d;
  for (int iter = 0; iter < 1000; ++iter) {
    if ((fb > 0 && fc > 0) || (fb < 0 && fc < 0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2 * kEps * std::fabs(b) + kTiny;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol || fb == 0) return b;
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2 * xm * qq * (qq - r) - (b - a) * (r - 1));
        q = (qq - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      const double min1 = 3 * xm * q - std::fabs(tol * q);
      const double min2 = std::fabs(e * q);
      if (2 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : std::copysign(tol, xm);
    fb = fn(b);
  }
  return b;
}
