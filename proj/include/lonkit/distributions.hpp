#pragma once

namespace lonkit::dist {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

double log_beta(double a, double b);

/// Student t with `df` degrees of freedom.
double student_t_cdf(double t, double df);
/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

/// F distribution with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);
/// P(F >= f).
double f_upper_p(double f, double d1, double d2);

double normal_cdf(double z);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

}  // namespace lonkit::dist
