// decbench: decoder energy/time benchmarking and Bjontegaard-Delta reporting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "decbench/bd/bd_delta.hpp"
#include "decbench/error.hpp"
#include "decbench/format.hpp"
#include "decbench/meter/measurement_lock.hpp"
#include "decbench/pipeline/jobs.hpp"
#include "decbench/pipeline/plan.hpp"
#include "decbench/pipeline/result_store.hpp"
#include "decbench/pipeline/runner.hpp"
#include "decbench/quality/psnr.hpp"
#include "decbench/report/report.hpp"

namespace fs = std::filesystem;
using namespace decbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitExecution = 2;

struct Globals {
  std::string store;
  std::string plan;
  std::string format = "markdown";
};

void print_notices(const std::vector<std::string>& notices) {
  for (const auto& n : notices) std::cerr << "notice: " << n << '\n';
}

pipeline::ExperimentPlan require_plan(const Globals& g) {
  if (g.plan.empty()) throw Error(Errc::kInvalidArgument, "--plan is required");
  return pipeline::load_plan(g.plan);
}

fs::path store_path(const Globals& g, const pipeline::ExperimentPlan* plan) {
  if (!g.store.empty()) return g.store;
  if (plan != nullptr) return plan->work_dir / "results.jsonl";
  throw Error(Errc::kInvalidArgument, "--store is required");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path);
  out << text;
}

std::vector<bd::CurvePoint> read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kNotFound, "cannot read curve file " + path);
  std::vector<bd::CurvePoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    bd::CurvePoint p;
    if (!(fields >> p.cost >> p.quality)) {
      if (line_no == 1) continue;  // header
      throw Error(Errc::kInvalidArgument,
                  path + ":" + std::to_string(line_no) + ": expected 'cost,quality'");
    }
    points.push_back(p);
  }
  return points;
}

std::string default_reference(const std::vector<pipeline::ResultRecord>& records) {
  for (const auto& r : records) {
    if (r.role == "reference") return r.variant;
  }
  throw Error(Errc::kNotFound, "store has no reference records; pass --reference");
}

std::string default_test(const std::vector<pipeline::ResultRecord>& records,
                         const std::string& reference) {
  std::set<std::string> tests;
  for (const auto& r : records) {
    if (r.variant != reference) tests.insert(r.variant);
  }
  if (tests.size() != 1) {
    throw Error(Errc::kInvalidArgument,
                "store holds " + std::to_string(tests.size()) + " test variants; pass --test");
  }
  return *tests.begin();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoder energy and time benchmarking with Bjontegaard-Delta reporting"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--store", g.store, "Result store (JSON lines)");
  app.add_option("--plan", g.plan, "Experiment plan (JSON)");
  app.add_option("--format", g.format, "Output format: markdown or csv");

  int exit_code = kExitOk;
  auto run = [&](auto&& body) {
    return [&, body] {
      try {
        exit_code = body();
      } catch (const Error& e) {
        std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << '\n';
        exit_code = is_validation_error(e.code()) ? kExitValidation : kExitExecution;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        exit_code = kExitExecution;
      }
    };
  };

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Validate a plan and list its jobs");
  plan_cmd->callback(run([&] {
    const auto plan = require_plan(g);
    const auto expansion = pipeline::plan_jobs(plan);
    print_notices(expansion.notices);
    std::cout << "sequence\tconfig\tqp\tvariant\tcontent_hash\n";
    for (const auto& j : expansion.jobs) {
      std::cout << j.sequence << '\t' << pipeline::config_name(j.config) << '\t' << j.qp << '\t'
                << j.variant_id << '\t' << j.content_hash << '\n';
    }
    std::cerr << expansion.jobs.size() << " jobs\n";
    return kExitOk;
  }));

  // encode
  int workers = 0;
  auto* encode_cmd = app.add_subcommand("encode", "Run (cached) encodes for every planned job");
  encode_cmd->add_option("--workers", workers, "Concurrent encoder processes (default: plan)");
  encode_cmd->callback(run([&] {
    const auto plan = require_plan(g);
    auto expansion = pipeline::plan_jobs(plan);
    print_notices(expansion.notices);
    pipeline::Runner runner(plan);
    runner.run_encodes(expansion.jobs, workers > 0 ? workers : plan.encode_workers);
    std::size_t failed = 0, hits = 0;
    for (const auto& j : expansion.jobs) {
      if (j.status == pipeline::JobStatus::kFailed) {
        ++failed;
        std::cerr << "failed: " << j.key() << "\n" << j.message << '\n';
      }
      if (j.cache_hit) ++hits;
    }
    std::cout << expansion.jobs.size() << " jobs, " << hits << " cached, " << failed
              << " failed\n";
    return failed == 0 ? kExitOk : kExitExecution;
  }));

  // measure
  std::string lock_log;
  auto* measure_cmd =
      app.add_subcommand("measure", "Measure decoding energy/time of encoded jobs (serial)");
  measure_cmd->add_option("--lock-log", lock_log, "Append lock acquire/release events here");
  measure_cmd->callback(run([&] {
    const auto plan = require_plan(g);
    const auto store = pipeline::ResultStore(store_path(g, &plan));
    auto expansion = pipeline::plan_jobs(plan);
    print_notices(expansion.notices);

    std::vector<std::string> notices;
    std::set<std::string> done;
    for (const auto& r : store.load_latest(&notices)) {
      if (r.measured()) done.insert(r.content_hash + "/" + r.variant);
    }
    print_notices(notices);

    auto backend = pipeline::make_backend(plan.measurement.backend);
    const auto baseline = pipeline::resolve_idle(plan.measurement.idle, *backend);
    pipeline::RunnerOptions options;
    options.lock_event_log = lock_log;
    pipeline::Runner runner(plan, options);

    std::size_t failed = 0, measured = 0, skipped = 0;
    for (auto& job : expansion.jobs) {
      if (done.count(job.content_hash + "/" + job.variant_id)) {
        ++skipped;
        continue;
      }
      const auto rec = runner.run_decode_measured(job, plan.measurement.rule, *backend, baseline,
                                                  store);
      if (rec.measured()) {
        ++measured;
        for (const auto& w : rec.warnings) std::cerr << "warning: " << job.key() << ": " << w << '\n';
      } else {
        ++failed;
        std::cerr << "failed: " << job.key() << ": " << rec.error << '\n';
      }
    }
    fs::path csv = store.path();
    csv.replace_extension(".csv");
    write_output(pipeline::export_csv(store.load_latest()), csv.string());
    std::cout << measured << " measured, " << skipped << " already in store, " << failed
              << " failed\n";
    return failed == 0 ? kExitOk : kExitExecution;
  }));

  // psnr
  std::string ref_path, dec_path, peak = "full";
  quality::VideoSpec spec;
  double clamp = 999.0;
  auto* psnr_cmd = app.add_subcommand("psnr", "YUV-PSNR between two raw 4:2:0 files");
  psnr_cmd->add_option("--ref", ref_path, "Reference YUV")->required();
  psnr_cmd->add_option("--dec", dec_path, "Decoded YUV")->required();
  psnr_cmd->add_option("--width", spec.width)->required();
  psnr_cmd->add_option("--height", spec.height)->required();
  psnr_cmd->add_option("--frames", spec.frame_count)->required();
  psnr_cmd->add_option("--bit-depth", spec.bit_depth, "8 or 10");
  psnr_cmd->add_option("--peak", peak, "Peak convention: full (2^b-1) or hm (255<<(b-8))");
  psnr_cmd->add_option("--clamp", clamp, "PSNR ceiling in dB");
  psnr_cmd->callback(run([&] {
    quality::PsnrOptions options;
    options.clamp_db = clamp;
    if (peak == "hm") {
      options.peak = quality::PeakConvention::kScaled8Bit;
    } else if (peak != "full") {
      throw Error(Errc::kInvalidArgument, "--peak must be full or hm");
    }
    const auto p = quality::sequence_psnr(ref_path, dec_path, spec, options);
    std::cout << "psnr_y " << format_fixed(p.psnr_y, 4) << "\npsnr_u " << format_fixed(p.psnr_u, 4)
              << "\npsnr_v " << format_fixed(p.psnr_v, 4) << "\npsnr_yuv "
              << format_fixed(p.psnr_yuv, 4) << "\nclamped_frames " << p.clamped_frames << '\n';
    return kExitOk;
  }));

  // bd
  std::string bd_ref, bd_test, method = bd::method_name(bd::kDefaultMethod), cost_label = "cost";
  auto* bd_cmd = app.add_subcommand("bd", "Bjontegaard-Delta of two cost,quality CSV curves");
  bd_cmd->add_option("reference", bd_ref, "Reference curve CSV")->required();
  bd_cmd->add_option("test", bd_test, "Test curve CSV")->required();
  bd_cmd->add_option("--method", method, "cubic-fit or piecewise-cubic-hermite");
  bd_cmd->add_option("--cost-label", cost_label, "Label of the cost variable (rate, energy, ...)");
  bd_cmd->callback(run([&] {
    const bd::QualityCurve ref(read_curve_csv(bd_ref), "reference");
    const bd::QualityCurve test(read_curve_csv(bd_test), "test");
    const auto r = bd::bd_delta(ref, test, bd::parse_method(method));
    std::cerr << "BD-" << cost_label << " (" << bd::method_name(r.method) << ", overlap "
              << format_fixed(r.overlap_low_db, 2) << "-" << format_fixed(r.overlap_high_db, 2)
              << " dB)\n";
    std::cout << format_fixed(r.delta_percent, 2) << '\n';
    return kExitOk;
  }));

  // report
  auto* report_cmd = app.add_subcommand("report", "Tables and plot-ready exports from a store");
  report_cmd->require_subcommand(1);
  std::string reference, test, output, bd_method = bd::method_name(bd::kDefaultMethod);
  std::vector<std::string> configs;
  std::vector<std::string> metric_names;
  bool ablation = false;
  auto* table_cmd = report_cmd->add_subcommand("table", "Per-class BD table with mean row");
  table_cmd->add_option("--reference", reference, "Reference variant (default: role reference)");
  table_cmd->add_option("--test", test, "Test variant (default: the only other variant)");
  table_cmd->add_option("--configs", configs, "Configurations, in column order")->delimiter(',');
  table_cmd->add_option("--metrics", metric_names, "Subset of bdr,bddt,bdde")->delimiter(',');
  table_cmd->add_option("--method", bd_method);
  table_cmd->add_flag("--ablation", ablation, "Caption with the tool-off sign convention");
  table_cmd->add_option("-o,--output", output);

  std::string x_metric = "bdr", y_metric = "bdde";
  auto* scatter_cmd = report_cmd->add_subcommand("scatter", "Per-sequence BD scatter CSV");
  scatter_cmd->add_option("--reference", reference);
  scatter_cmd->add_option("--test", test);
  scatter_cmd->add_option("--x", x_metric);
  scatter_cmd->add_option("--y", y_metric);
  scatter_cmd->add_option("--configs", configs)->delimiter(',');
  scatter_cmd->add_option("--method", bd_method);
  scatter_cmd->add_option("-o,--output", output);

  std::string sequence, config, cost = "energy";
  auto* curves_cmd = report_cmd->add_subcommand("curves", "Cost vs YUV-PSNR points per variant");
  curves_cmd->add_option("--sequence", sequence)->required();
  curves_cmd->add_option("--config", config)->required();
  curves_cmd->add_option("--cost", cost, "rate, energy or time");
  curves_cmd->add_option("-o,--output", output);

  auto load_records = [&] {
    std::vector<std::string> notices;
    auto records = pipeline::ResultStore(store_path(g, nullptr)).load_latest(&notices);
    print_notices(notices);
    if (records.empty()) throw Error(Errc::kEmptyReport, "result store is empty");
    return records;
  };
  auto gather_bd = [&](const std::vector<pipeline::ResultRecord>& records) {
    if (reference.empty()) reference = default_reference(records);
    if (test.empty()) test = default_test(records, reference);
    std::vector<std::string> notices;
    auto results =
        report::collect_bd(records, reference, test, bd::parse_method(bd_method), {22, 27, 32, 37},
                           &notices);
    print_notices(notices);
    if (!configs.empty()) {
      std::erase_if(results, [&](const report::SequenceBd& s) {
        return std::find(configs.begin(), configs.end(), s.config) == configs.end();
      });
    }
    return results;
  };

  table_cmd->callback(run([&] {
    const auto records = load_records();
    const auto results = gather_bd(records);
    std::vector<std::string> cols = configs;
    if (cols.empty()) {
      for (const char* c : {"AI", "LB", "RA"}) {
        for (const auto& r : records) {
          if (r.config == c) {
            cols.emplace_back(c);
            break;
          }
        }
      }
    }
    auto reports = report::aggregate_configs(results, cols, reference, test);
    if (ablation) {
      for (auto& r : reports) r.sign_convention = report::kAblationSignConvention;
    }
    std::vector<report::Metric> metrics;
    for (const auto& m : metric_names) metrics.push_back(report::parse_metric(m));
    if (metrics.empty()) metrics = {report::Metric::kBdr, report::Metric::kBddt, report::Metric::kBdde};
    write_output(report::render_table(reports, report::parse_format(g.format), metrics), output);
    return kExitOk;
  }));

  scatter_cmd->callback(run([&] {
    const auto records = load_records();
    const auto results = gather_bd(records);
    std::vector<std::string> notices;
    const auto csv = report::export_scatter(results, report::parse_metric(x_metric),
                                            report::parse_metric(y_metric), &notices);
    print_notices(notices);
    write_output(csv, output);
    return kExitOk;
  }));

  curves_cmd->callback(run([&] {
    const auto records = load_records();
    write_output(report::export_curves(records, sequence, config, bd::parse_cost_field(cost)),
                 output);
    return kExitOk;
  }));

  // idle-calibrate
  double duration = 10.0;
  std::string rapl_domain;
  auto* idle_cmd = app.add_subcommand("idle-calibrate", "Measure the idle power baseline");
  idle_cmd->add_option("--duration", duration, "Calibration window in seconds");
  idle_cmd->add_option("--rapl", rapl_domain, "RAPL powercap domain directory");
  idle_cmd->add_option("-o,--output", output, "Write the baseline JSON here");
  idle_cmd->callback(run([&] {
    std::unique_ptr<meter::PowerBackend> backend;
    if (!g.plan.empty()) {
      backend = pipeline::make_backend(pipeline::load_plan(g.plan).measurement.backend);
    } else {
      backend = std::make_unique<meter::RaplSysfsBackend>(
          rapl_domain.empty() ? meter::RaplSysfsBackend::kDefaultDomain : rapl_domain);
    }
    const auto baseline = meter::calibrate_idle(*backend, duration);
    if (!output.empty()) pipeline::save_baseline(baseline, output);
    std::cout << format_fixed(baseline.idle_power_w, 4) << " W\n";
    return kExitOk;
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  return exit_code;
}
