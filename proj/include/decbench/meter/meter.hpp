#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "decbench/meter/power_backend.hpp"

namespace decbench::meter {

struct IdleBaseline {
  double idle_power_w = 0.0;
  double calibration_duration_s = 0.0;
  /// Seconds since the Unix epoch; 0 for baselines not taken by calibrate_idle.
  long long captured_at = 0;
};

/// Confidence-interval stopping rule on the mean decoding energy.
struct StoppingRule {
  double alpha = 0.99;
  double beta = 0.02;
  std::size_t min_iterations = 3;
  std::size_t max_iterations = 100;

  void validate() const;
};

struct EnergySample {
  double energy_j = 0.0;
  double time_s = 0.0;
};

/// Validated mean decoding energy of one bitstream.
struct EnergyMeasurement {
  double mean_energy_j = 0.0;
  double mean_time_s = 0.0;
  std::size_t sample_count = 0;
  double half_width_j = 0.0;
  bool confident = false;
  std::vector<EnergySample> samples;
  /// Samples dropped because idle subtraction made them negative.
  std::size_t excluded_samples = 0;
  std::vector<std::string> warnings;
};

/// Something to measure. Throws decbench::Error(kDecodeFailed) on failure.
using Workload = std::function<void()>;

struct OnceResult {
  EnergySample sample;
  /// Energy after idle subtraction was below zero; sample must not be used.
  bool negative = false;
};

struct ConfidenceResult {
  bool confident = false;
  double half_width_j = 0.0;
  double mean_j = 0.0;
};

IdleBaseline calibrate_idle(PowerBackend& backend, double duration_s);

OnceResult measure_once(PowerBackend& backend, const IdleBaseline& baseline,
                        const Workload& workload);

ConfidenceResult confidence_check(std::span<const double> energies, const StoppingRule& rule);

EnergyMeasurement measure_until_confident(PowerBackend& backend, const IdleBaseline& baseline,
                                          const Workload& workload, const StoppingRule& rule);

}  // namespace decbench::meter
