#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace decbench::meter {

enum class BackendKind { kRaplSysfs, kReplayTrace, kSyntheticSampler };

/// One observation of a cumulative energy counter together with the time it
/// was taken on the backend's own timeline.
struct CounterReading {
  std::uint64_t energy_uj = 0;
  double time_s = 0.0;
};

/// Source of cumulative energy readings.
///
/// Counters are monotone modulo max_counter(); consumers take differences
/// with counter_delta(). Replay and synthetic backends run on a virtual
/// timeline so that repeated sessions are bit-identical.
class PowerBackend {
 public:
  virtual ~PowerBackend() = default;

  virtual BackendKind kind() const = 0;
  virtual std::uint64_t max_counter() const = 0;

  /// Throws kBackendUnavailable when the counter cannot be read and
  /// kCorruptCounter when the value is not below max_counter().
  virtual CounterReading read() = 0;

  /// Lets `seconds` pass with no workload running.
  virtual void idle(double seconds) = 0;

  /// Called once after every measured workload, before the closing read.
  /// Simulated backends account the workload's energy and duration here.
  virtual void workload_finished() {}

  std::uint64_t read_counter() { return read().energy_uj; }
};

/// (after - before) mod max_counter.
std::uint64_t counter_delta(std::uint64_t before, std::uint64_t after,
                            std::uint64_t max_counter);

/// Package-domain RAPL counter exposed through the powercap sysfs tree.
class RaplSysfsBackend final : public PowerBackend {
 public:
  static constexpr const char* kDefaultDomain = "/sys/class/powercap/intel-rapl:0";

  /// Reads max_energy_range_uj from `domain_dir` unless `max_counter` is given.
  explicit RaplSysfsBackend(std::filesystem::path domain_dir = kDefaultDomain,
                            std::uint64_t max_counter = 0);

  BackendKind kind() const override { return BackendKind::kRaplSysfs; }
  std::uint64_t max_counter() const override { return max_counter_; }
  CounterReading read() override;
  void idle(double seconds) override;

  const std::filesystem::path& counter_path() const { return counter_path_; }

 private:
  std::filesystem::path counter_path_;
  std::uint64_t max_counter_;
  std::chrono::steady_clock::time_point origin_;
};

/// Replays a recorded counter trace.
///
/// Trace text format: one integer microjoule reading per line. An optional
/// second column holds the reading's timestamp in microseconds; without it,
/// reading k is stamped k * sample_interval. Blank lines and lines starting
/// with '#' are ignored.
class ReplayTraceBackend final : public PowerBackend {
 public:
  struct Options {
    std::uint64_t max_counter = std::uint64_t{1} << 62;
    double sample_interval_s = 1.0;
    /// Restart from the first reading when the trace is exhausted.
    bool cycle = false;
  };

  ReplayTraceBackend(std::vector<std::uint64_t> readings, Options options);
  ReplayTraceBackend(std::vector<std::uint64_t> readings,
                     std::vector<double> timestamps_s, Options options);
  explicit ReplayTraceBackend(std::vector<std::uint64_t> readings)
      : ReplayTraceBackend(std::move(readings), Options{}) {}

  static ReplayTraceBackend from_file(const std::filesystem::path& path, Options options);

  BackendKind kind() const override { return BackendKind::kReplayTrace; }
  std::uint64_t max_counter() const override { return options_.max_counter; }
  CounterReading read() override;
  void idle(double seconds) override;

  std::size_t position() const { return position_; }

 private:
  std::vector<std::uint64_t> readings_;
  std::vector<double> timestamps_s_;
  Options options_;
  std::size_t position_ = 0;
  std::size_t cycles_ = 0;
  double idle_offset_s_ = 0.0;
};

/// Simulated machine: constant idle draw plus a seeded random energy per
/// workload. The counter advances by idle_power * t while idling and by
/// (workload energy + idle_power * workload_seconds) per workload, so a
/// correctly calibrated baseline recovers the drawn workload energy.
class SyntheticSampler final : public PowerBackend {
 public:
  struct Options {
    double idle_power_w = 0.0;
    double workload_energy_mean_j = 0.0;
    double workload_energy_stddev_j = 0.0;
    double workload_seconds = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t max_counter = std::uint64_t{1} << 62;
  };

  explicit SyntheticSampler(Options options);

  BackendKind kind() const override { return BackendKind::kSyntheticSampler; }
  std::uint64_t max_counter() const override { return options_.max_counter; }
  CounterReading read() override;
  void idle(double seconds) override;
  void workload_finished() override;

 private:
  Options options_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_;
  double energy_uj_ = 0.0;
  double time_s_ = 0.0;
};

std::vector<std::uint64_t> parse_counter_trace(const std::string& text,
                                               std::vector<double>* timestamps_s = nullptr);

}  // namespace decbench::meter
