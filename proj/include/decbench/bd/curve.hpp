#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace decbench::bd {

struct CurvePoint {
  double cost = 0.0;     // kbps, joules or seconds; strictly positive
  double quality = 0.0;  // YUV-PSNR in dB
};

/// A cost-vs-quality curve, sorted by quality on construction.
///
/// Requires at least four points, distinct qualities, positive finite costs,
/// and cost strictly increasing with quality. Violations throw
/// Error(kInsufficientPoints) or Error(kInvalidCurve).
class QualityCurve {
 public:
  QualityCurve(std::vector<CurvePoint> points, std::string label = {});

  const std::vector<CurvePoint>& points() const { return points_; }
  const std::string& label() const { return label_; }
  double min_quality() const { return points_.front().quality; }
  double max_quality() const { return points_.back().quality; }

  static constexpr std::size_t kMinPoints = 4;

 private:
  std::vector<CurvePoint> points_;
  std::string label_;
};

enum class FitMethod {
  kCubicFit,                 // least-squares cubic polynomial
  kPiecewiseCubicHermite,    // monotone (Fritsch-Carlson) piecewise cubic
};

constexpr FitMethod kDefaultMethod = FitMethod::kPiecewiseCubicHermite;

const char* method_name(FitMethod method);
FitMethod parse_method(const std::string& name);

/// Maps quality (dB) to log10(cost) over [min_quality, max_quality].
class Interpolant {
 public:
  virtual ~Interpolant() = default;
  /// Throws Error(kOutOfRange) outside the fitted quality range.
  double operator()(double quality) const;
  double low() const { return low_; }
  double high() const { return high_; }

 protected:
  Interpolant(double low, double high) : low_(low), high_(high) {}
  virtual double evaluate(double quality) const = 0;

 private:
  double low_, high_;
};

std::unique_ptr<Interpolant> fit_log_cost(const QualityCurve& curve, FitMethod method);

}  // namespace decbench::bd
