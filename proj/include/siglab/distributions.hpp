#pragma once

// Special functions and the four reference distributions (normal, Student t,
// F, chi-squared). Everything here is a pure function of its arguments.
//
// Accuracy targets (absolute): 1e-12 for the special functions and the normal
// CDF, 1e-11 for the t/F/chi-squared CDFs. Quantiles invert the CDFs by
// bracketed root finding and satisfy |cdf(q) - p| <= 1e-10.

namespace siglab::dist {

/// Positive (possibly non-integer) degrees of freedom.
class DegreesOfFreedom {
 public:
  explicit DegreesOfFreedom(double value);

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// ln Gamma(x) for x > 0 (Lanczos approximation, reflection below 0.5).
double ln_gamma(double x);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double reg_inc_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without
/// cancellation in the upper tail.
double reg_inc_gamma_q(double a, double x);

double normal_cdf(double z);
double normal_quantile(double p);

double student_t_cdf(double t, DegreesOfFreedom df);
double student_t_quantile(double p, DegreesOfFreedom df);

double f_cdf(double x, DegreesOfFreedom d1, DegreesOfFreedom d2);
double f_quantile(double p, DegreesOfFreedom d1, DegreesOfFreedom d2);

double chi_squared_cdf(double x, DegreesOfFreedom df);
/// Upper tail 1 - F(x), accurate for small tail probabilities.
double chi_squared_sf(double x, DegreesOfFreedom df);
double chi_squared_quantile(double p, DegreesOfFreedom df);

}  // namespace siglab::dist
