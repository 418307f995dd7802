#include "decbench/pipeline/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "decbench/error.hpp"
#include "decbench/meter/measurement_lock.hpp"
#include "decbench/process.hpp"
#include "decbench/quality/psnr.hpp"

namespace decbench::pipeline {

namespace fs = std::filesystem;

namespace {

std::string plain_number(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

std::map<std::string, std::string> sequence_values(const SequenceEntry& seq, CodingConfig config,
                                                   int qp) {
  return {{"width", std::to_string(seq.spec.width)},
          {"height", std::to_string(seq.spec.height)},
          {"frames", std::to_string(seq.spec.frame_count)},
          {"framerate", plain_number(seq.frame_rate)},
          {"bitdepth", std::to_string(seq.spec.bit_depth)},
          {"sequence", seq.name},
          {"qp", std::to_string(qp)},
          {"config", config_name(config)}};
}

}  // namespace

Runner::Runner(const ExperimentPlan& plan, RunnerOptions options)
    : plan_(plan), options_(std::move(options)) {}

void Runner::refresh_status(JobRecord& job) const {
  if (job.status == JobStatus::kPending && fs::exists(job.bitstream_path)) {
    job.status = JobStatus::kEncoded;
  }
}

JobRecord Runner::run_encode(JobRecord job) const {
  if (fs::exists(job.bitstream_path)) {
    job.status = JobStatus::kEncoded;
    job.cache_hit = true;
    job.message = "cache hit: " + job.bitstream_path.filename().string();
    return job;
  }
  const auto& seq = plan_.sequence(job.sequence);
  const auto& variant = plan_.variant(job.variant_id);

  fs::create_directories(job.bitstream_path.parent_path());
  fs::path partial = job.bitstream_path;
  partial += ".part";
  fs::remove(partial);

  auto values = sequence_values(seq, job.config, job.qp);
  values["input"] = seq.source_path.string();
  values["output"] = partial.string();
  values["config"] = variant.config_value(job.config);
  const auto argv = variant.encoder_command.instantiate(values, variant.tool_overrides);

  ProcessResult result;
  try {
    ++processes_started_;
    result = run_process(argv);
  } catch (const Error& e) {
    job.status = JobStatus::kFailed;
    job.message = e.what();
    return job;
  }
  if (result.exit_code != 0) {
    job.status = JobStatus::kFailed;
    job.message = "encoder exited with status " + std::to_string(result.exit_code) + "\n" +
                  result.output;
    fs::remove(partial);
    return job;
  }
  if (!fs::exists(partial)) {
    job.status = JobStatus::kFailed;
    job.message = "encoder succeeded but wrote no bitstream to " + partial.string() + "\n" +
                  result.output;
    return job;
  }
  fs::rename(partial, job.bitstream_path);
  job.status = JobStatus::kEncoded;
  job.message.clear();
  return job;
}

void Runner::run_encodes(std::vector<JobRecord>& jobs, int workers) const {
  workers = std::max(1, workers);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      if (jobs[i].status == JobStatus::kPending) jobs[i] = run_encode(jobs[i]);
    }
  };
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
}

fs::path Runner::decoded_path(const JobRecord& job) const {
  return plan_.work_dir / "decoded" / job.variant_id /
         (job.sequence + "_" + config_name(job.config) + "_qp" + std::to_string(job.qp) + ".yuv");
}

ResultRecord Runner::run_decode_measured(JobRecord& job, const meter::StoppingRule& rule,
                                         meter::PowerBackend& backend,
                                         const meter::IdleBaseline& baseline,
                                         const ResultStore& store) const {
  const auto& seq = plan_.sequence(job.sequence);
  const auto& variant = plan_.variant(job.variant_id);

  ResultRecord rec;
  rec.sequence = seq.name;
  rec.sequence_class = class_name(seq.sequence_class);
  rec.config = config_name(job.config);
  rec.qp = job.qp;
  rec.variant = variant.variant_id;
  rec.role = variant.role == VariantRole::kReference ? "reference" : "test";
  rec.content_hash = job.content_hash;
  rec.bitstream = job.bitstream_path.lexically_relative(plan_.work_dir).generic_string();

  auto fail = [&](const std::string& message) {
    rec.status = "failed";
    rec.error = message;
    job.status = JobStatus::kFailed;
    job.message = message;
    store.append(rec);
    return rec;
  };

  refresh_status(job);
  if (job.status != JobStatus::kEncoded) {
    return fail("not-encoded: bitstream " + job.bitstream_path.string() + " missing");
  }

  const fs::path output = decoded_path(job);
  fs::create_directories(output.parent_path());
  auto values = sequence_values(seq, job.config, job.qp);
  values["bitstream"] = job.bitstream_path.string();
  values["output"] = output.string();
  const auto argv = variant.decoder_command.instantiate(values);

  meter::Workload decode = [&] {
    ++processes_started_;
    const ProcessResult r = run_process(argv);
    if (r.exit_code != 0) {
      throw Error(Errc::kDecodeFailed,
                  "decoder exited with status " + std::to_string(r.exit_code) + "\n" + r.output);
    }
  };

  try {
    meter::MeasurementLock lock(job.key(), options_.lock_event_log, options_.lock_path);
    rec.energy = meter::measure_until_confident(backend, baseline, decode, rule);
  } catch (const Error& e) {
    return fail(std::string(errc_name(e.code())) + ": " + e.what());
  }
  rec.warnings = rec.energy.warnings;
  rec.decode_time_s = rec.energy.mean_time_s;
  rec.bitstream_bytes = fs::file_size(job.bitstream_path);
  rec.bitrate_kbps = bitrate_kbps(rec.bitstream_bytes, seq.frame_rate, seq.spec.frame_count);

  try {
    rec.psnr = quality::sequence_psnr(seq.source_path, output, seq.spec, {},
                                      /*reference_may_be_longer=*/true);
  } catch (const Error& e) {
    if (!plan_.keep_decoded) fs::remove(output);
    return fail(std::string("psnr-mismatch: ") + e.what());
  }
  if (!plan_.keep_decoded) fs::remove(output);

  if (!(rec.bitrate_kbps > 0.0) || !(rec.energy.mean_energy_j > 0.0) ||
      !(rec.decode_time_s > 0.0)) {
    return fail("non-positive cost: bitrate " + std::to_string(rec.bitrate_kbps) +
                " kbps, energy " + std::to_string(rec.energy.mean_energy_j) + " J, time " +
                std::to_string(rec.decode_time_s) + " s");
  }
  rec.status = "measured";
  job.status = JobStatus::kMeasured;
  store.append(rec);
  return rec;
}

std::vector<bd::CurveSet> group_curve_sets(const std::vector<ResultRecord>& records) {
  std::map<bd::CurveKey, bd::CurveSet> groups;
  for (const auto& r : records) {
    if (!r.measured()) continue;
    bd::CurveKey key{r.sequence, r.sequence_class, r.config, r.variant};
    auto& set = groups[key];
    set.key = key;
    set.points.push_back(
        {r.qp, r.bitrate_kbps, r.energy.mean_energy_j, r.decode_time_s, r.psnr.psnr_yuv});
  }
  std::vector<bd::CurveSet> out;
  for (auto& [key, set] : groups) {
    std::sort(set.points.begin(), set.points.end(),
              [](const bd::MeasuredPoint& a, const bd::MeasuredPoint& b) {
                return a.psnr_yuv < b.psnr_yuv;
              });
    out.push_back(std::move(set));
  }
  return out;
}

CurveBuild build_curves(const std::vector<ResultRecord>& records, bd::CostField field,
                        const std::vector<int>& qps) {
  CurveBuild out;
  for (auto& set : group_curve_sets(records)) {
    try {
      bd::require_qps(set, qps);
      auto curve = bd::make_curve(set, field);
      out.curves.push_back(std::move(curve));
      out.sets.push_back(std::move(set));
    } catch (const Error& e) {
      out.notices.push_back(std::string(errc_name(e.code())) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace decbench::pipeline
