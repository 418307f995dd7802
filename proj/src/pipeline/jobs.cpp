#include "decbench/pipeline/jobs.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>

#include "decbench/error.hpp"

namespace decbench::pipeline {

namespace fs = std::filesystem;

const char* status_name(JobStatus s) {
  switch (s) {
    case JobStatus::kPending: return "pending";
    case JobStatus::kEncoded: return "encoded";
    case JobStatus::kMeasured: return "measured";
    case JobStatus::kFailed: return "failed";
  }
  return "?";
}

std::string JobRecord::key() const {
  return sequence + "/" + config_name(config) + "/qp" + std::to_string(qp) + "/" + variant_id;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::kIo, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::string content_hash(const SequenceEntry& sequence, const CodecVariant& variant,
                         CodingConfig config, int qp) {
  constexpr char kSep = '\x1f';
  std::string material = "decbench-encode-v1";
  material += kSep;
  for (const auto& arg : variant.encoder_command.argv()) material += arg + kSep;
  material += "|flags";
  for (const auto& flag : variant.tool_overrides) material += kSep + flag;
  material += "|config";
  material += kSep + std::string(config_name(config)) + kSep + variant.config_value(config);
  material += "|qp" + std::to_string(qp);
  material += "|input";
  material += kSep + sequence.name + kSep + fs::absolute(sequence.source_path).string();
  material += kSep + std::to_string(sequence.spec.width) + "x" +
              std::to_string(sequence.spec.height) + "@" +
              std::to_string(sequence.spec.bit_depth) + "b/" +
              std::to_string(sequence.spec.frame_count) + "f/" +
              std::to_string(sequence.frame_rate);
  std::error_code ec;
  const auto size = fs::file_size(sequence.source_path, ec);
  if (!ec) {
    material += kSep + std::to_string(size);
    const auto mtime = fs::last_write_time(sequence.source_path, ec);
    if (!ec) material += kSep + std::to_string(mtime.time_since_epoch().count());
  }
  return sha256_hex(material);
}

JobExpansion plan_jobs(const ExperimentPlan& plan) {
  JobExpansion out;
  for (const auto& seq : plan.sequences) {
    for (auto config : plan.configs) {
      if (!config_applicable(seq.sequence_class, config)) {
        out.notices.push_back("skip: " + seq.name + " (class " + class_name(seq.sequence_class) +
                              ") is not coded with " + config_name(config));
        continue;
      }
      for (int qp : plan.qps) {
        for (const auto& variant : plan.variants) {
          if (!variant.runs_config(config)) continue;
          JobRecord job;
          job.sequence = seq.name;
          job.config = config;
          job.qp = qp;
          job.variant_id = variant.variant_id;
          job.content_hash = content_hash(seq, variant, config, qp);
          job.bitstream_path = plan.work_dir / "bitstreams" / variant.variant_id /
                               (seq.name + "_" + config_name(config) + "_qp" +
                                std::to_string(qp) + "_" + job.content_hash.substr(0, 16) +
                                ".bin");
          out.jobs.push_back(std::move(job));
        }
      }
    }
  }
  return out;
}

}  // namespace decbench::pipeline
