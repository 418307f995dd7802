#include "decbench/bd/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "decbench/error.hpp"

namespace decbench::bd {

QualityCurve::QualityCurve(std::vector<CurvePoint> points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
  const std::string who = label_.empty() ? std::string("curve") : "curve '" + label_ + "'";
  if (points_.size() < kMinPoints) {
    throw Error(Errc::kInsufficientPoints, who + " has " + std::to_string(points_.size()) +
                                               " points, needs at least " +
                                               std::to_string(kMinPoints));
  }
  for (const auto& p : points_) {
    if (!(p.cost > 0.0) || !std::isfinite(p.cost) || !std::isfinite(p.quality)) {
      throw Error(Errc::kInvalidCurve, who + ": costs must be positive and finite, qualities finite");
    }
  }
  std::sort(points_.begin(), points_.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.quality < b.quality; });
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].quality == points_[i - 1].quality) {
      throw Error(Errc::kInvalidCurve,
                  who + ": duplicate quality " + std::to_string(points_[i].quality) + " dB");
    }
    if (!(points_[i].cost > points_[i - 1].cost)) {
      throw Error(Errc::kInvalidCurve, who + ": cost does not increase with quality between " +
                                           std::to_string(points_[i - 1].quality) + " and " +
                                           std::to_string(points_[i].quality) + " dB");
    }
  }
}

const char* method_name(FitMethod method) {
  return method == FitMethod::kCubicFit ? "cubic-fit" : "piecewise-cubic-hermite";
}

FitMethod parse_method(const std::string& name) {
  if (name == "cubic-fit" || name == "cubic" || name == "poly") return FitMethod::kCubicFit;
  if (name == "piecewise-cubic-hermite" || name == "pchip") {
    return FitMethod::kPiecewiseCubicHermite;
  }
  throw Error(Errc::kInvalidArgument, "unknown BD method '" + name +
                                          "' (expected cubic-fit or piecewise-cubic-hermite)");
}

double Interpolant::operator()(double quality) const {
  if (!(quality >= low_ && quality <= high_)) {
    throw Error(Errc::kOutOfRange, "quality " + std::to_string(quality) +
                                       " dB outside fitted range [" + std::to_string(low_) +
                                       ", " + std::to_string(high_) + "]");
  }
  return evaluate(quality);
}

namespace {

// Least-squares cubic on the standardized abscissa (q - center) / scale,
// which keeps the normal equations well conditioned for dB-valued inputs.
class CubicFit final : public Interpolant {
 public:
  explicit CubicFit(const QualityCurve& curve)
      : Interpolant(curve.min_quality(), curve.max_quality()) {
    const auto& pts = curve.points();
    center_ = 0.5 * (low() + high());
    scale_ = 0.5 * (high() - low());

    std::array<std::array<double, 5>, 4> aug{};  // normal equations | rhs
    for (const auto& p : pts) {
      const double x = (p.quality - center_) / scale_;
      const double y = std::log10(p.cost);
      std::array<double, 4> powers{1.0, x, x * x, x * x * x};
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) aug[r][c] += powers[r] * powers[c];
        aug[r][4] += powers[r] * y;
      }
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 4; ++col) {
      int pivot = col;
      for (int r = col + 1; r < 4; ++r) {
        if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
      }
      std::swap(aug[col], aug[pivot]);
      if (aug[col][col] == 0.0) {
        throw Error(Errc::kInvalidCurve, "singular cubic fit");
      }
      for (int r = col + 1; r < 4; ++r) {
        const double f = aug[r][col] / aug[col][col];
        for (int c = col; c < 5; ++c) aug[r][c] -= f * aug[col][c];
      }
    }
    for (int r = 3; r >= 0; --r) {
      double acc = aug[r][4];
      for (int c = r + 1; c < 4; ++c) acc -= aug[r][c] * coeffs_[c];
      coeffs_[r] = acc / aug[r][r];
    }
  }

 protected:
  double evaluate(double quality) const override {
    const double x = (quality - center_) / scale_;
    return ((coeffs_[3] * x + coeffs_[2]) * x + coeffs_[1]) * x + coeffs_[0];
  }

 private:
  double center_ = 0.0;
  double scale_ = 1.0;
  std::array<double, 4> coeffs_{};
};

// Shape-preserving piecewise cubic Hermite interpolation. Interior slopes
// are the weighted harmonic mean of neighbouring secants (zero at local
// extrema); end slopes use the three-point one-sided formula limited to
// preserve monotonicity.
class MonotoneHermite final : public Interpolant {
 public:
  explicit MonotoneHermite(const QualityCurve& curve)
      : Interpolant(curve.min_quality(), curve.max_quality()) {
    const auto& pts = curve.points();
    const std::size_t n = pts.size();
    x_.resize(n);
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = pts[i].quality;
      y_[i] = std::log10(pts[i].cost);
    }
    std::vector<double> h(n - 1), secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      h[k] = x_[k + 1] - x_[k];
      secant[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    slope_.assign(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double a = secant[k - 1];
      const double b = secant[k];
      if (a == 0.0 || b == 0.0 || std::signbit(a) != std::signbit(b)) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slope_[k] = (w1 + w2) / (w1 / a + w2 / b);
    }
    slope_[0] = end_slope(h[0], h[1], secant[0], secant[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], secant[n - 2], secant[n - 3]);
  }

 protected:
  double evaluate(double quality) const override {
    auto it = std::upper_bound(x_.begin(), x_.end(), quality);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (k >= x_.size() - 1) k = x_.size() - 2;
    const double h = x_[k + 1] - x_[k];
    const double t = (quality - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
  }

 private:
  static double end_slope(double h0, double h1, double m0, double m1) {
    const double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (std::signbit(d) != std::signbit(m0) || m0 == 0.0) return 0.0;
    if (std::signbit(m0) != std::signbit(m1) && std::fabs(d) > 3.0 * std::fabs(m0)) {
      return 3.0 * m0;
    }
    return d;
  }

  std::vector<double> x_, y_, slope_;
};

}  // namespace

std::unique_ptr<Interpolant> fit_log_cost(const QualityCurve& curve, FitMethod method) {
  if (method == FitMethod::kCubicFit) return std::make_unique<CubicFit>(curve);
  return std::make_unique<MonotoneHermite>(curve);
}

}  // namespace decbench::bd
