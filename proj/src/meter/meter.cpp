#include "decbench/meter/meter.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "decbench/error.hpp"
#include "decbench/meter/student_t.hpp"

namespace decbench::meter {

void StoppingRule::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::kInvalidArgument, "stopping rule: alpha must lie in (0, 1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(Errc::kInvalidArgument, "stopping rule: beta must lie in (0, 1)");
  }
  if (min_iterations < 2) {
    throw Error(Errc::kInvalidArgument, "stopping rule: min_iterations must be >= 2");
  }
  if (max_iterations < min_iterations) {
    throw Error(Errc::kInvalidArgument, "stopping rule: max_iterations < min_iterations");
  }
}

IdleBaseline calibrate_idle(PowerBackend& backend, double duration_s) {
  if (!(duration_s > 0.0)) {
    throw Error(Errc::kInvalidArgument, "idle calibration duration must be positive");
  }
  const CounterReading before = backend.read();
  backend.idle(duration_s);
  const CounterReading after = backend.read();
  const auto delta_uj = counter_delta(before.energy_uj, after.energy_uj, backend.max_counter());
  IdleBaseline baseline;
  baseline.idle_power_w = static_cast<double>(delta_uj) * 1e-6 / duration_s;
  baseline.calibration_duration_s = duration_s;
  baseline.captured_at = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count();
  return baseline;
}

OnceResult measure_once(PowerBackend& backend, const IdleBaseline& baseline,
                        const Workload& workload) {
  const CounterReading before = backend.read();
  workload();
  backend.workload_finished();
  const CounterReading after = backend.read();

  const auto delta_uj = counter_delta(before.energy_uj, after.energy_uj, backend.max_counter());
  const double elapsed = after.time_s - before.time_s;
  const double energy = static_cast<double>(delta_uj) * 1e-6 - baseline.idle_power_w * elapsed;
  return {{energy, elapsed}, energy < 0.0};
}

ConfidenceResult confidence_check(std::span<const double> energies, const StoppingRule& rule) {
  const std::size_t n = energies.size();
  if (n < 2) {
    throw Error(Errc::kInsufficientSamples,
                "confidence check needs at least 2 samples, got " + std::to_string(n));
  }
  const double mean = std::accumulate(energies.begin(), energies.end(), 0.0) / n;
  double sum_sq = 0.0;
  for (double e : energies) sum_sq += (e - mean) * (e - mean);
  const double stddev = std::sqrt(sum_sq / static_cast<double>(n - 1));

  ConfidenceResult result;
  result.mean_j = mean;
  if (stddev == 0.0) {
    result.half_width_j = 0.0;
  } else {
    const double t = student_t_quantile(0.5 * (1.0 + rule.alpha), static_cast<double>(n - 1));
    result.half_width_j = t * stddev / std::sqrt(static_cast<double>(n));
  }
  result.confident = result.half_width_j <= rule.beta * mean;
  return result;
}

EnergyMeasurement measure_until_confident(PowerBackend& backend, const IdleBaseline& baseline,
                                          const Workload& workload, const StoppingRule& rule) {
  rule.validate();
  EnergyMeasurement m;
  std::vector<double> energies;
  ConfidenceResult check;
  for (;;) {
    const OnceResult once = measure_once(backend, baseline, workload);
    if (once.negative) {
      ++m.excluded_samples;
      m.warnings.push_back("negative-energy: sample of " + std::to_string(once.sample.energy_j) +
                           " J excluded (idle baseline drift?)");
      if (m.excluded_samples > rule.max_iterations) {
        throw Error(Errc::kNotConverged, "more than " + std::to_string(rule.max_iterations) +
                                             " negative-energy samples; recalibrate idle");
      }
      continue;
    }
    m.samples.push_back(once.sample);
    energies.push_back(once.sample.energy_j);

    if (energies.size() >= rule.min_iterations) {
      check = confidence_check(energies, rule);
      if (check.confident) break;
    }
    if (energies.size() >= rule.max_iterations) {
      m.warnings.push_back("not-converged: half width " + std::to_string(check.half_width_j) +
                           " J after " + std::to_string(energies.size()) + " samples");
      break;
    }
  }

  m.sample_count = m.samples.size();
  m.mean_energy_j = check.mean_j;
  double time_sum = 0.0;
  for (const auto& s : m.samples) time_sum += s.time_s;
  m.mean_time_s = time_sum / static_cast<double>(m.sample_count);
  m.half_width_j = check.half_width_j;
  m.confident = check.confident;
  return m;
}

}  // namespace decbench::meter
