#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "decbench/pipeline/plan.hpp"

namespace decbench::pipeline {

enum class JobStatus { kPending, kEncoded, kMeasured, kFailed };

const char* status_name(JobStatus s);

/// One (sequence, configuration, QP, variant) cell of the experiment matrix.
struct JobRecord {
  std::string sequence;
  CodingConfig config = CodingConfig::kRA;
  int qp = 0;
  std::string variant_id;
  std::filesystem::path bitstream_path;
  JobStatus status = JobStatus::kPending;
  /// SHA-256 over the encoder template, tool flags, configuration value, QP
  /// and the identity of the source file.
  std::string content_hash;
  /// Captured process output or error text for failed jobs.
  std::string message;
  bool cache_hit = false;

  std::string key() const;
};

struct JobExpansion {
  std::vector<JobRecord> jobs;
  std::vector<std::string> notices;
};

/// Cartesian product sequences x applicable configs x QPs x variants, in
/// plan order. Class/config combinations outside the applicability map are
/// skipped with a notice.
JobExpansion plan_jobs(const ExperimentPlan& plan);

std::string content_hash(const SequenceEntry& sequence, const CodecVariant& variant,
                         CodingConfig config, int qp);

std::string sha256_hex(const std::string& data);

}  // namespace decbench::pipeline
