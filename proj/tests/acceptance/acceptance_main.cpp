// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "decbench/bd/bd_delta.hpp"
#include "decbench/error.hpp"
#include "decbench/format.hpp"
#include "decbench/meter/meter.hpp"
#include "decbench/pipeline/jobs.hpp"
#include "decbench/pipeline/plan.hpp"
#include "decbench/pipeline/result_store.hpp"
#include "decbench/quality/psnr.hpp"
#include "decbench/report/report.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace decbench;
using namespace decbench::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s  %s  %s%s%s\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.empty() ? "" : "  -- ", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v, int decimals = 4) { return format_fixed(v, decimals); }

Outcome bdde_vvc() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const bd::QualityCurve hevc(kHevcCurve), vvc(kVvcCurve);
  const double pchip = bd::bd_delta(hevc, vvc, bd::FitMethod::kPiecewiseCubicHermite).delta_percent;
  const double cubic = bd::bd_delta(hevc, vvc, bd::FitMethod::kCubicFit).delta_percent;
  const double dflt = bd::bd_delta(hevc, vvc).delta_percent;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail = "pchip " + fmt(pchip) + ", cubic " + fmt(cubic) + ", default " +
             bd::method_name(bd::kDefaultMethod) + " " + fmt(dflt) + ", " + fmt(secs, 3) + " s";
  const bool pchip_closer = std::abs(pchip - 72.39) <= std::abs(cubic - 72.39);
  o.pass = std::abs(dflt - 72.39) <= 0.75 && secs < 1.0 &&
           (bd::kDefaultMethod == bd::FitMethod::kPiecewiseCubicHermite) == pchip_closer;
  return o;
}

Outcome bdde_proposed() {
  Outcome o;
  const double d =
      bd::bd_delta(bd::QualityCurve(kHevcCurve), bd::QualityCurve(kProposedCurve)).delta_percent;
  o.detail = "default method " + fmt(d);
  o.pass = std::abs(d - 22.68) <= 0.75;
  return o;
}

std::vector<bd::CurvePoint> random_curve(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> q0(28, 38), dq(1.0, 4.0), c0(10, 5000), r(1.02, 1.6);
  std::vector<bd::CurvePoint> pts;
  double q = q0(rng), c = c0(rng);
  for (int i = 0; i < 4; ++i) {
    pts.push_back({c, q});
    q += dq(rng);
    c *= r(rng);
  }
  return pts;
}

Outcome bd_properties() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(1e-3, 1e4), shift(-1.5, 1.5);
  double worst_identity = 0, worst_ratio = 0, worst_scale = 0, worst_recip = 0, worst_refine = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a_pts = random_curve(rng);
    auto b_pts = random_curve(rng);
    const double offset = a_pts[0].quality - b_pts[0].quality + shift(rng);
    for (auto& p : b_pts) p.quality += offset;
    const bd::QualityCurve a(a_pts), b(b_pts);
    for (auto m : {bd::FitMethod::kCubicFit, bd::FitMethod::kPiecewiseCubicHermite}) {
      worst_identity = std::max(worst_identity, std::abs(bd::bd_delta(a, a, m).delta_percent));
      for (double c : {0.5, 0.9, 1.1, 2.0}) {
        auto s = a_pts;
        for (auto& p : s) p.cost *= c;
        worst_ratio = std::max(
            worst_ratio,
            std::abs(bd::bd_delta(a, bd::QualityCurve(s), m).delta_percent - (c - 1) * 100));
      }
      const double ab = bd::bd_delta(a, b, m).delta_percent;
      const double ba = bd::bd_delta(b, a, m).delta_percent;
      worst_recip = std::max(worst_recip, std::abs((1 + ab / 100) * (1 + ba / 100) - 1));
      const double k = unit(rng);
      auto ak = a_pts, bk = b_pts;
      for (auto& p : ak) p.cost *= k;
      for (auto& p : bk) p.cost *= k;
      worst_scale = std::max(
          worst_scale,
          std::abs(bd::bd_delta(bd::QualityCurve(ak), bd::QualityCurve(bk), m).delta_percent - ab));
      worst_refine =
          std::max(worst_refine, std::abs(bd::bd_delta(a, b, m, 2000).delta_percent - ab));
    }
  }
  std::ostringstream d;
  d << "max errors: identity " << worst_identity << ", ratio " << worst_ratio << ", scale "
    << worst_scale << ", reciprocal " << worst_recip << ", refinement " << worst_refine;
  o.detail = d.str();
  o.pass = worst_identity <= 1e-9 && worst_ratio <= 1e-6 && worst_scale <= 1e-9 &&
           worst_recip <= 1e-6 && worst_refine <= 1e-6;
  return o;
}

Outcome stopping_statistics() {
  Outcome o;
  const meter::Workload noop = [] {};
  meter::StoppingRule rule;  // alpha 0.99, beta 0.02
  rule.max_iterations = 10000;
  const double mu = 100.0;
  std::ostringstream d;
  for (double sigma : {0.5, 1.0, 2.0}) {
    int within = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      meter::SyntheticSampler s({.workload_energy_mean_j = mu,
                                 .workload_energy_stddev_j = sigma,
                                 .seed = static_cast<std::uint64_t>(t) * 7919 + 1});
      const auto m = meter::measure_until_confident(s, {}, noop, rule);
      if (!m.confident) continue;
      if (std::abs(m.mean_energy_j - mu) <= rule.beta * mu) ++within;
    }
    const double frac = static_cast<double>(within) / trials;
    d << "sigma " << sigma << ": " << fmt(frac * 100, 1) << "% ";
    o.require(frac >= 0.96, "coverage below 96% at sigma " + fmt(sigma, 1));
  }
  meter::SyntheticSampler flat({.workload_energy_mean_j = mu});
  const auto m = meter::measure_until_confident(flat, {}, noop, meter::StoppingRule{});
  d << "zero variance: " << m.sample_count << " samples";
  o.require(m.sample_count == meter::StoppingRule{}.min_iterations && m.confident,
            "zero variance did not stop at min_iterations");
  o.detail = d.str() + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

quality::Plane plane(int w, int h, std::uint16_t v) {
  return {w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h, v)};
}

Outcome psnr_suite() {
  Outcome o;
  TempDir dir;
  const quality::VideoSpec spec{16, 16, 8, 2};
  write_yuv(dir / "a.yuv", pattern_frames(spec, 4), 8);
  const auto same = quality::sequence_psnr(dir / "a.yuv", dir / "a.yuv", spec);
  o.require(same.psnr_y == 999 && same.psnr_u == 999 && same.psnr_v == 999 &&
                same.psnr_yuv == 999,
            "identical files not clamped at 999 dB");

  const double zero = quality::frame_psnr(plane(8, 8, 0), plane(8, 8, 255), 8).db;
  o.require(std::abs(zero) <= 1e-9, "uniform error 255 gave " + fmt(zero, 6));

  const double ten_bit = quality::frame_psnr(plane(8, 8, 300), plane(8, 8, 301), 10).db;
  o.require(std::abs(ten_bit - 20 * std::log10(1023.0)) <= 1e-6 &&
                std::abs(ten_bit - 60.1975) <= 5e-5,
            "10-bit MSE 1 gave " + fmt(ten_bit, 6));
  const double mse4 = quality::frame_psnr(plane(8, 8, 50), plane(8, 8, 52), 8).db;
  // 10*log10(255^2/4) = 42.110204, checked at 1e-6.
  o.require(std::abs(mse4 - 10 * std::log10(255.0 * 255 / 4)) <= 1e-6,
            "8-bit MSE 4 gave " + fmt(mse4, 6));

  for (double p : {0.0, 33.3, 41.0, 999.0}) {
    o.require(std::abs(quality::yuv_psnr(p, p, p) - p) <= 1e-9, "weight identity fails");
  }
  quality::SequencePsnrAccumulator acc;
  acc.add({40, false}, {38, false}, {38, false});
  acc.add({42, false}, {38, false}, {38, false});
  o.require(std::abs(acc.result().psnr_yuv - 40.25) <= 1e-9, "per-frame average example fails");

  std::mt19937 rng(17);
  std::uniform_int_distribution<int> s8(0, 255);
  quality::PsnrOptions hm;
  hm.peak = quality::PeakConvention::kScaled8Bit;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    auto a = plane(16, 16, 0), b = plane(16, 16, 0);
    for (auto& v : a.samples) v = static_cast<std::uint16_t>(s8(rng));
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
      b.samples[i] = static_cast<std::uint16_t>(std::clamp(a.samples[i] + s8(rng) % 9 - 4, 0, 255));
    }
    auto a10 = a, b10 = b;
    for (auto& v : a10.samples) v = static_cast<std::uint16_t>(v * 4);
    for (auto& v : b10.samples) v = static_cast<std::uint16_t>(v * 4);
    const auto p8 = quality::frame_psnr(a, b, 8, hm);
    const auto p10 = quality::frame_psnr(a10, b10, 10, hm);
    if (!p8.clamped) worst = std::max(worst, std::abs(p8.db - p10.db));
  }
  o.require(worst <= 1e-9, "8->10 bit scaling differs by " + std::to_string(worst));
  o.detail = "60.1975 -> " + fmt(ten_bit, 6) + ", 10*log10(255^2/4) -> " + fmt(mse4, 6) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

struct RunOutputs {
  std::vector<std::pair<std::string, std::string>> files;
  std::size_t jobs = 0;
  std::size_t measured = 0;
};

RunOutputs run_pipeline(const fs::path& inputs, const fs::path& run_dir, Outcome& o) {
  const auto sc = make_end_to_end(inputs, run_dir);
  RunOutputs out;
  out.jobs = sc.expected_jobs;
  const std::string plan = sc.plan_file.string();
  const std::string store = (sc.work_dir / "results.jsonl").string();
  std::string log;
  auto step = [&](const std::vector<std::string>& args) {
    const int rc = run_cli(args, &log);
    o.require(rc == 0, args[2] + " exited " + std::to_string(rc) + ": " + log.substr(0, 300));
  };
  step({"--plan", plan, "plan"});
  step({"--plan", plan, "encode"});
  step({"--plan", plan, "measure"});
  step({"--store", store, "report", "table", "-o", (run_dir / "table.md").string()});
  step({"--store", store, "--format", "csv", "report", "table", "-o",
        (run_dir / "table.csv").string()});
  step({"--store", store, "report", "scatter", "-o", (run_dir / "scatter.csv").string()});
  step({"--store", store, "report", "curves", "--sequence", "Market", "--config", "RA", "-o",
        (run_dir / "curves.csv").string()});
  for (const auto& [name, path] :
       std::vector<std::pair<std::string, fs::path>>{{"results.jsonl", store},
                                                     {"results.csv", sc.work_dir / "results.csv"},
                                                     {"table.md", run_dir / "table.md"},
                                                     {"table.csv", run_dir / "table.csv"},
                                                     {"scatter.csv", run_dir / "scatter.csv"},
                                                     {"curves.csv", run_dir / "curves.csv"}}) {
    out.files.emplace_back(name, fs::exists(path) ? read_file(path) : std::string());
  }
  for (const auto& r : pipeline::ResultStore(store).load_latest()) out.measured += r.measured();
  return out;
}

Outcome end_to_end() {
  Outcome o;
  TempDir root;
  const auto inputs = root / "inputs";
  const auto first = run_pipeline(inputs, root / "run1", o);
  const auto second = run_pipeline(inputs, root / "run2", o);

  // A1 skips LB and E skips RA: (2 + 3 + 2) configurations x 4 QPs x 2 variants.
  o.require(first.jobs == 56, "planned " + std::to_string(first.jobs) + " jobs, expected 56");
  o.require(first.measured == first.jobs,
            std::to_string(first.measured) + " of " + std::to_string(first.jobs) + " measured");
  std::size_t identical = 0;
  for (std::size_t i = 0; i < first.files.size(); ++i) {
    const auto& [name, content] = first.files[i];
    o.require(!content.empty(), name + " missing or empty");
    if (content == second.files[i].second) {
      ++identical;
    } else {
      o.require(false, name + " differs between runs");
    }
  }
  const std::string& table = first.files[2].second;
  o.require(table.find("| A1 |") != std::string::npos && table.find("| E |") != std::string::npos,
            "table lacks class rows");
  o.require(table.find(" - |") != std::string::npos, "table lacks dash cells");
  const std::string& curves = first.files[5].second;
  o.require(std::count(curves.begin(), curves.end(), '\n') == 9, "curve export is not 2x4 rows");
  o.detail = std::to_string(first.jobs) + " jobs, " + std::to_string(first.measured) +
             " measured, " + std::to_string(identical) + "/" + std::to_string(first.files.size()) +
             " outputs byte-identical" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome aggregation() {
  Outcome o;
  const std::vector<report::SequenceBd> results{
      {"x1", "B", "RA", "t", std::nullopt, std::nullopt, 0.0},
      {"x2", "B", "RA", "t", std::nullopt, std::nullopt, 10.0},
      {"y1", "C", "RA", "t", std::nullopt, std::nullopt, 40.0}};
  const auto r = report::aggregate(results, "RA");
  const auto md = report::render_table({r}, report::TableFormat::kMarkdown, {report::Metric::kBdde});
  o.require(r.rows.size() == 2 && *r.rows[0].bdde_percent == 5.0 &&
                *r.rows[1].bdde_percent == 40.0,
            "class rows wrong");
  o.require(md.find("| B | 5.00 |") != std::string::npos &&
                md.find("| C | 40.00 |") != std::string::npos &&
                md.find("| Mean | 16.67 |") != std::string::npos,
            "rendered table wrong:\n" + md);
  o.detail = "rows 5.00 / 40.00, overall " + format_fixed(*r.overall.bdde_percent, 2);
  return o;
}

}  // namespace

int main() {
  criterion("bdde-fixture", "HEVC vs VVC energy curves give 72.39% +-0.75 in < 1 s", bdde_vvc);
  criterion("bdde-proposed", "HEVC vs proposed configuration gives 22.68% +-0.75", bdde_proposed);
  criterion("bd-properties", "identity, constant ratio, unit scaling, reciprocal, refinement",
         bd_properties);
  criterion("stopping-rule", ">= 96% of 1000 trials within beta*mu; zero variance stops at minimum",
         stopping_statistics);
  criterion("psnr-suite", "clamp, 0 dB, MSE fixtures, weight identity, bit-depth scaling",
         psnr_suite);
  criterion("end-to-end", "mock codec + replay trace pipeline is byte-identical across runs",
         end_to_end);
  criterion("aggregation", "2-class example gives rows 5.0/40.0 and overall 16.67", aggregation);
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
