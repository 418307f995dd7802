#pragma once

#include <string>
#include <vector>

#include "decbench/bd/curve.hpp"

namespace decbench::bd {

struct BDResult {
  /// Percent cost change of test relative to reference at equal quality;
  /// positive means the test curve costs more.
  double delta_percent = 0.0;
  double overlap_low_db = 0.0;
  double overlap_high_db = 0.0;
  FitMethod method = kDefaultMethod;
};

constexpr int kDefaultSubintervals = 1000;

/// Mean log10-cost difference over the common quality range, integrated
/// with composite Simpson on `subintervals` (rounded up to even) panels.
BDResult bd_delta(const QualityCurve& reference, const QualityCurve& test,
                  FitMethod method = kDefaultMethod, int subintervals = kDefaultSubintervals);

enum class CostField { kRate, kEnergy, kTime };

const char* cost_field_name(CostField field);
/// Accepts rate/bitrate, energy and time.
CostField parse_cost_field(const std::string& name);

/// One measured rate/energy/time/quality point of a curve.
struct MeasuredPoint {
  int qp = 0;
  double bitrate_kbps = 0.0;
  double energy_j = 0.0;
  double time_s = 0.0;
  double psnr_yuv = 0.0;

  double cost(CostField field) const;
};

struct CurveKey {
  std::string sequence;
  std::string sequence_class;
  std::string config;
  std::string variant;

  auto operator<=>(const CurveKey&) const = default;
};

struct CurveSet {
  CurveKey key;
  std::vector<MeasuredPoint> points;
};

struct BdEntry {
  std::string sequence;
  std::string sequence_class;
  std::string config;
  std::string reference_variant;
  std::string test_variant;
  CostField field = CostField::kRate;
  BDResult result;
};

QualityCurve make_curve(const CurveSet& set, CostField field);

/// Throws Error(kIncompleteCurve) naming the first missing QP.
void require_qps(const CurveSet& set, const std::vector<int>& qps);

/// One BD value per (sequence, config) that has both a reference and a test
/// curve. With `notices` null, incomplete or invalid curves throw; otherwise
/// the group is skipped and a notice appended.
std::vector<BdEntry> bd_table(const std::vector<CurveSet>& sets,
                              const std::string& reference_variant,
                              const std::string& test_variant, CostField field,
                              FitMethod method = kDefaultMethod,
                              const std::vector<int>& qps = {22, 27, 32, 37},
                              std::vector<std::string>* notices = nullptr);

}  // namespace decbench::bd
