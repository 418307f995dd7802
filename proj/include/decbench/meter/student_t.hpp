#pragma once

namespace decbench::meter {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// Inverse of incomplete_beta in x: returns x with I_x(a, b) = p.
/// Absolute accuracy in x is better than 1e-12 for p in (0, 1).
double incomplete_beta_inverse(double a, double b, double p);

/// Quantile of Student's t distribution with `dof` degrees of freedom.
/// Relative accuracy better than 1e-8.
double student_t_quantile(double p, double dof);

}  // namespace decbench::meter
