#include "decbench/meter/student_t.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decbench/error.hpp"

namespace decbench::meter {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b),
// valid (fast converging) for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxTerms = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "incomplete_beta: arguments out of domain");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double incomplete_beta_inverse(double a, double b, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "incomplete_beta_inverse: p outside [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  // Safeguarded Newton: the bracket [lo, hi] always contains the root and
  // any Newton step leaving it falls back to bisection.
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = incomplete_beta(a, b, x) - p;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density =
        std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
    double next = x - f / density;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) < 1e-15 * std::max(1.0, x) || hi - lo < 1e-15) {
      return next;
    }
    x = next;
  }
  return x;
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0) || !(dof > 0.0)) {
    throw Error(Errc::kInvalidArgument,
                "student_t_quantile: need p in (0,1) and dof > 0, got p=" +
                    std::to_string(p) + " dof=" + std::to_string(dof));
  }
  if (p == 0.5) return 0.0;
  // For t > 0: P(T > t) = I_x(dof/2, 1/2) / 2 with x = dof / (dof + t^2).
  const double upper_tail = p > 0.5 ? 1.0 - p : p;
  const double x = incomplete_beta_inverse(0.5 * dof, 0.5, 2.0 * upper_tail);
  const double t = std::sqrt(dof * (1.0 - x) / x);
  return p > 0.5 ? t : -t;
}

}  // namespace decbench::meter
