#pragma once

#include <filesystem>
#include <string>

namespace decbench::meter {

/// Machine-wide exclusive lock held for the duration of a measured decode.
///
/// The lock file path comes from $DECBENCH_MEASURE_LOCK, falling back to
/// <temp dir>/decbench-measure.lock. When an event log path is given, every
/// acquisition and release is appended to it as
/// "<acquire|release> <monotonic ns> <label>".
class MeasurementLock {
 public:
  static constexpr const char* kEnvVar = "DECBENCH_MEASURE_LOCK";

  explicit MeasurementLock(std::string label = {},
                           std::filesystem::path event_log = {},
                           std::filesystem::path lock_path = default_path());
  ~MeasurementLock();

  MeasurementLock(const MeasurementLock&) = delete;
  MeasurementLock& operator=(const MeasurementLock&) = delete;

  static std::filesystem::path default_path();

 private:
  void log_event(const char* what) const;

  int fd_ = -1;
  std::string label_;
  std::filesystem::path event_log_;
};

}  // namespace decbench::meter
