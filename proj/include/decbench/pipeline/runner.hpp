#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "decbench/bd/bd_delta.hpp"
#include "decbench/meter/measurement_lock.hpp"
#include "decbench/meter/meter.hpp"
#include "decbench/pipeline/jobs.hpp"
#include "decbench/pipeline/plan.hpp"
#include "decbench/pipeline/result_store.hpp"

namespace decbench::pipeline {

struct RunnerOptions {
  std::filesystem::path lock_path = meter::MeasurementLock::default_path();
  /// When set, lock acquire/release events are appended here.
  std::filesystem::path lock_event_log;
};

/// Executes encode and measured-decode jobs of one plan.
class Runner {
 public:
  explicit Runner(const ExperimentPlan& plan, RunnerOptions options = {});

  /// Marks the job encoded when its bitstream already exists.
  void refresh_status(JobRecord& job) const;

  /// Encodes a pending job. A bitstream already present for the job's
  /// content hash is a cache hit and no process is started. Encoder failures
  /// set status failed and keep the captured output in job.message.
  JobRecord run_encode(JobRecord job) const;

  /// Encodes all jobs with up to `workers` concurrent encoder processes.
  void run_encodes(std::vector<JobRecord>& jobs, int workers) const;

  /// Measures decoding of an encoded job under the machine-wide lock,
  /// computes bitrate and PSNR, and appends the record to `store`.
  /// Failures are recorded on the returned record rather than thrown.
  ResultRecord run_decode_measured(JobRecord& job, const meter::StoppingRule& rule,
                                   meter::PowerBackend& backend,
                                   const meter::IdleBaseline& baseline,
                                   const ResultStore& store) const;

  std::size_t processes_started() const { return processes_started_.load(); }

 private:
  std::filesystem::path decoded_path(const JobRecord& job) const;

  const ExperimentPlan& plan_;
  RunnerOptions options_;
  mutable std::atomic<std::size_t> processes_started_{0};
};

struct CurveBuild {
  std::vector<bd::CurveSet> sets;
  std::vector<bd::QualityCurve> curves;  // parallel to sets
  std::vector<std::string> notices;
};

/// Groups measured records into one curve per (sequence, config, variant),
/// sorted by quality. Groups missing a QP or not forming a valid curve are
/// excluded and named in the notices.
CurveBuild build_curves(const std::vector<ResultRecord>& records, bd::CostField field,
                        const std::vector<int>& qps = {22, 27, 32, 37});

/// Groups measured records without curve validation (for BD tables that
/// evaluate several cost fields).
std::vector<bd::CurveSet> group_curve_sets(const std::vector<ResultRecord>& records);

}  // namespace decbench::pipeline
