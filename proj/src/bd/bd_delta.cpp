#include "decbench/bd/bd_delta.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "decbench/error.hpp"

namespace decbench::bd {

BDResult bd_delta(const QualityCurve& reference, const QualityCurve& test, FitMethod method,
                  int subintervals) {
  const double low = std::max(reference.min_quality(), test.min_quality());
  const double high = std::min(reference.max_quality(), test.max_quality());
  if (!(low < high)) {
    throw Error(Errc::kNoOverlap, "quality ranges do not overlap: reference [" +
                                      std::to_string(reference.min_quality()) + ", " +
                                      std::to_string(reference.max_quality()) + "], test [" +
                                      std::to_string(test.min_quality()) + ", " +
                                      std::to_string(test.max_quality()) + "]");
  }
  if (subintervals < 2) subintervals = 2;
  if (subintervals % 2 != 0) ++subintervals;

  const auto ref_fit = fit_log_cost(reference, method);
  const auto test_fit = fit_log_cost(test, method);
  auto diff = [&](double q) { return (*test_fit)(q) - (*ref_fit)(q); };

  const double h = (high - low) / subintervals;
  double sum = diff(low) + diff(high);
  for (int i = 1; i < subintervals; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * diff(low + i * h);
  }
  const double integral = sum * h / 3.0;
  const double mean_log_diff = integral / (high - low);

  BDResult r;
  r.delta_percent = (std::pow(10.0, mean_log_diff) - 1.0) * 100.0;
  r.overlap_low_db = low;
  r.overlap_high_db = high;
  r.method = method;
  return r;
}

const char* cost_field_name(CostField field) {
  switch (field) {
    case CostField::kRate: return "rate";
    case CostField::kEnergy: return "energy";
    case CostField::kTime: return "time";
  }
  return "rate";
}

CostField parse_cost_field(const std::string& name) {
  if (name == "rate" || name == "bitrate") return CostField::kRate;
  if (name == "energy") return CostField::kEnergy;
  if (name == "time") return CostField::kTime;
  throw Error(Errc::kInvalidArgument,
              "unknown cost field '" + name + "' (expected rate, energy or time)");
}

double MeasuredPoint::cost(CostField field) const {
  switch (field) {
    case CostField::kRate: return bitrate_kbps;
    case CostField::kEnergy: return energy_j;
    case CostField::kTime: return time_s;
  }
  return bitrate_kbps;
}

namespace {

std::string describe(const CurveKey& key) {
  return key.sequence + "/" + key.config + "/" + key.variant;
}

}  // namespace

void require_qps(const CurveSet& set, const std::vector<int>& qps) {
  for (int qp : qps) {
    const bool present = std::any_of(set.points.begin(), set.points.end(),
                                     [qp](const MeasuredPoint& p) { return p.qp == qp; });
    if (!present) {
      throw Error(Errc::kIncompleteCurve,
                  describe(set.key) + ": missing QP " + std::to_string(qp));
    }
  }
}

QualityCurve make_curve(const CurveSet& set, CostField field) {
  std::vector<CurvePoint> pts;
  pts.reserve(set.points.size());
  for (const auto& p : set.points) pts.push_back({p.cost(field), p.psnr_yuv});
  return QualityCurve(std::move(pts), describe(set.key) + "/" + cost_field_name(field));
}

std::vector<BdEntry> bd_table(const std::vector<CurveSet>& sets,
                              const std::string& reference_variant,
                              const std::string& test_variant, CostField field, FitMethod method,
                              const std::vector<int>& qps, std::vector<std::string>* notices) {
  using GroupKey = std::pair<std::string, std::string>;  // sequence, config
  std::map<GroupKey, const CurveSet*> refs;
  std::map<GroupKey, const CurveSet*> tests;
  for (const auto& s : sets) {
    const GroupKey g{s.key.sequence, s.key.config};
    if (s.key.variant == reference_variant) refs[g] = &s;
    if (s.key.variant == test_variant) tests[g] = &s;
  }

  std::vector<BdEntry> out;
  for (const auto& [group, test] : tests) {
    auto ref_it = refs.find(group);
    if (ref_it == refs.end()) {
      const std::string msg = group.first + "/" + group.second + ": no reference curve for '" +
                              reference_variant + "'";
      if (notices == nullptr) throw Error(Errc::kIncompleteCurve, msg);
      notices->push_back(msg);
      continue;
    }
    try {
      require_qps(*ref_it->second, qps);
      require_qps(*test, qps);
      BdEntry e;
      e.sequence = group.first;
      e.sequence_class = test->key.sequence_class;
      e.config = group.second;
      e.reference_variant = reference_variant;
      e.test_variant = test_variant;
      e.field = field;
      e.result = bd_delta(make_curve(*ref_it->second, field), make_curve(*test, field), method);
      out.push_back(std::move(e));
    } catch (const Error& err) {
      if (notices == nullptr) throw;
      notices->push_back(std::string(errc_name(err.code())) + ": " + err.what());
    }
  }
  return out;
}

}  // namespace decbench::bd
