#include <cmath>
#include <numbers>
#include <string>

#include "siglab/distributions.hpp"
#include "siglab/errors.hpp"
#include "special_functions_impl.hpp"

namespace siglab::dist {
namespace {

void check_probability(double p, const char* who) {
  if (!(p > 0 && p < 1)) {
    throw DomainError(std::string(who) + " requires 0 < p < 1 (p=" + std::to_string(p) + ")");
  }
}

void check_nonnegative(double x, const char* who) {
  if (!(x >= 0)) throw DomainError(std::string(who) + " requires x >= 0");
}

// Upper normal tail 1 - Phi(z) for z >= 0, without cancellation.
double normal_upper(double z) {
  if (z > 40) return 0.0;
  return 0.5 * reg_inc_gamma_q(0.5, 0.5 * z * z);
}

// Expands [lo, hi] outward (geometrically) until g changes sign.
template <class Fn>
double solve_bracketed(Fn&& g, double lo, double hi, double lo_limit) {
  double glo = g(lo);
  double step = hi - lo;
  while (glo > 0) {
    hi = lo;
    lo = std::max(lo - step, lo_limit);
    step *= 2;
    glo = g(lo);
    if (lo == lo_limit) break;
  }
  double ghi = g(hi);
  step = hi - lo;
  while (ghi < 0) {
    lo = hi;
    glo = ghi;
    hi += step;
    step *= 2;
    ghi = g(hi);
  }
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  return detail::brent_root(g, lo, hi, glo, ghi);
}

}  // namespace

DegreesOfFreedom::DegreesOfFreedom(double value) : value_(value) {
  if (!(value > 0)) throw DomainError("degrees of freedom must be positive");
}

double normal_cdf(double z) {
  if (std::isnan(z)) throw DomainError("normal_cdf of NaN");
  return z < 0 ? normal_upper(-z) : 1.0 - normal_upper(z);
}

// Acklam's rational approximation (relative error ~1e-9), polished with two
// Halley steps against normal_cdf. The residual is formed on the tail that
// p lies in, so it stays accurate as p approaches 0 or 1.
double normal_quantile(double p) {
  check_probability(p, "normal_quantile");
  if (p == 0.5) return 0.0;
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }

  const double tail = p < 0.5 ? p : 1.0 - p;  // exact for p > 0.5
  for (int i = 0; i < 2; ++i) {
    // e = Phi(x) - p, evaluated on the relevant tail.
    const double e = p < 0.5 ? normal_upper(-x) - tail : tail - normal_upper(x);
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1 + 0.5 * x * u);
  }
  return x;
}

double student_t_cdf(double t, DegreesOfFreedom df) {
  if (std::isnan(t)) throw DomainError("student_t_cdf of NaN");
  if (t == 0) return 0.5;
  const double v = df.value();
  const double t2 = t * t;
  double x, y;
  if (std::isinf(t2)) {
    x = 0.0;
    y = 1.0;
  } else {
    x = v / (v + t2);
    y = t2 / (v + t2);
  }
  const double tail = 0.5 * detail::inc_beta(x, y, 0.5 * v, 0.5, false);
  return t < 0 ? tail : 1.0 - tail;
}

double student_t_quantile(double p, DegreesOfFreedom df) {
  check_probability(p, "student_t_quantile");
  if (p == 0.5) return 0.0;
  const double v = df.value();
  // Cornish-Fisher seed around the normal quantile.
  const double z = normal_quantile(p);
  const double z3 = z * z * z;
  double seed = z + (z3 + z) / (4 * v) + (5 * z3 * z * z + 16 * z3 + 3 * z) / (96 * v * v);
  if (!std::isfinite(seed)) seed = z;
  const double half = 0.5 * std::max(1.0, std::fabs(seed));
  auto g = [&](double t) { return student_t_cdf(t, df) - p; };
  return solve_bracketed(g, seed - half, seed + half, -std::numeric_limits<double>::max());
}

double f_cdf(double x, DegreesOfFreedom d1, DegreesOfFreedom d2) {
  check_nonnegative(x, "f_cdf");
  if (x == 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double n = d1.value() * x;
  const double m = d2.value();
  return detail::inc_beta(n / (n + m), m / (n + m), 0.5 * d1.value(), 0.5 * m, false);
}

double f_quantile(double p, DegreesOfFreedom d1, DegreesOfFreedom d2) {
  check_probability(p, "f_quantile");
  auto g = [&](double x) { return f_cdf(x, d1, d2) - p; };
  return solve_bracketed(g, 0.0, 1.0, 0.0);
}

double chi_squared_cdf(double x, DegreesOfFreedom df) {
  check_nonnegative(x, "chi_squared_cdf");
  return reg_inc_gamma_p(0.5 * df.value(), 0.5 * x);
}

double chi_squared_sf(double x, DegreesOfFreedom df) {
  check_nonnegative(x, "chi_squared_sf");
  return reg_inc_gamma_q(0.5 * df.value(), 0.5 * x);
}

double chi_squared_quantile(double p, DegreesOfFreedom df) {
  check_probability(p, "chi_squared_quantile");
  auto g = [&](double x) { return chi_squared_cdf(x, df) - p; };
  return solve_bracketed(g, 0.0, std::max(1.0, df.value()), 0.0);
}

}  // namespace siglab::dist
