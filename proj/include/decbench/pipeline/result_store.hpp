#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "decbench/meter/meter.hpp"
#include "decbench/quality/psnr.hpp"

namespace decbench::pipeline {

/// Persisted outcome of one measured decode.
struct ResultRecord {
  std::string sequence;
  std::string sequence_class;
  std::string config;
  int qp = 0;
  std::string variant;
  std::string role;
  std::string content_hash;
  /// Bitstream path relative to the plan's work directory.
  std::string bitstream;
  /// "measured" or "failed".
  std::string status;
  std::string error;
  std::vector<std::string> warnings;
  std::uintmax_t bitstream_bytes = 0;
  double bitrate_kbps = 0.0;
  quality::SequencePsnr psnr;
  meter::EnergyMeasurement energy;
  double decode_time_s = 0.0;

  bool measured() const { return status == "measured"; }
  std::tuple<std::string, std::string, int, std::string> key() const {
    return {sequence, config, qp, variant};
  }
};

/// 8 * bytes * frame_rate / (1000 * frames).
double bitrate_kbps(std::uintmax_t bytes, double frame_rate, std::size_t frames);

std::string to_json_line(const ResultRecord& record);
ResultRecord from_json_line(const std::string& line);

/// Append-only JSON-lines record file. Later records for the same
/// (sequence, config, qp, variant) supersede earlier ones on load.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  void append(const ResultRecord& record) const;

  /// All parseable lines in file order. A torn final line (crash during
  /// append) is skipped with a notice; a missing file yields no records.
  std::vector<ResultRecord> load_all(std::vector<std::string>* notices = nullptr) const;

  /// Latest record per key, sorted by (sequence, config, qp, variant).
  std::vector<ResultRecord> load_latest(std::vector<std::string>* notices = nullptr) const;

 private:
  std::filesystem::path path_;
};

/// Measured records as CSV with columns sequence, class, config, qp,
/// variant, bitrate_kbps, psnr_y, psnr_u, psnr_v, psnr_yuv, energy_j,
/// energy_halfwidth_j, samples, time_s.
std::string export_csv(const std::vector<ResultRecord>& records);

}  // namespace decbench::pipeline
