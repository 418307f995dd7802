#include "decbench/meter/power_backend.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "decbench/error.hpp"

namespace decbench::meter {

namespace fs = std::filesystem;

std::uint64_t counter_delta(std::uint64_t before, std::uint64_t after,
                            std::uint64_t max_counter) {
  if (after >= before) return (after - before) % max_counter;
  return max_counter - before + after;
}

namespace {

std::uint64_t read_uint_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kBackendUnavailable, "cannot open energy counter " + path.string());
  }
  std::string text;
  std::getline(in, text);
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    throw Error(Errc::kBackendUnavailable,
                "cannot parse energy counter " + path.string() + ": '" + text + "'");
  }
  return value;
}

}  // namespace

RaplSysfsBackend::RaplSysfsBackend(fs::path domain_dir, std::uint64_t max_counter)
    : counter_path_(domain_dir / "energy_uj"),
      max_counter_(max_counter),
      origin_(std::chrono::steady_clock::now()) {
  if (max_counter_ == 0) {
    max_counter_ = read_uint_file(domain_dir / "max_energy_range_uj");
  }
  if (max_counter_ == 0) {
    throw Error(Errc::kBackendUnavailable,
                "max_energy_range_uj is zero under " + domain_dir.string());
  }
}

CounterReading RaplSysfsBackend::read() {
  const std::uint64_t value = read_uint_file(counter_path_);
  const auto now = std::chrono::steady_clock::now();
  if (value >= max_counter_) {
    throw Error(Errc::kCorruptCounter, "counter " + std::to_string(value) +
                                           " not below max " + std::to_string(max_counter_));
  }
  return {value, std::chrono::duration<double>(now - origin_).count()};
}

void RaplSysfsBackend::idle(double seconds) {
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

std::vector<std::uint64_t> parse_counter_trace(const std::string& text,
                                               std::vector<double>* timestamps_s) {
  std::vector<std::uint64_t> readings;
  std::vector<double> stamps;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t with_stamp = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    std::string energy_field;
    std::string time_field;
    fields >> energy_field >> time_field;
    std::uint64_t energy = 0;
    auto [ptr, ec] = std::from_chars(energy_field.data(),
                                     energy_field.data() + energy_field.size(), energy);
    if (ec != std::errc{} || ptr != energy_field.data() + energy_field.size()) {
      throw Error(Errc::kInvalidArgument,
                  "trace line " + std::to_string(line_no) + ": not an integer: " + line);
    }
    readings.push_back(energy);
    if (!time_field.empty()) {
      std::uint64_t micros = 0;
      auto [tptr, tec] =
          std::from_chars(time_field.data(), time_field.data() + time_field.size(), micros);
      if (tec != std::errc{} || tptr != time_field.data() + time_field.size()) {
        throw Error(Errc::kInvalidArgument, "trace line " + std::to_string(line_no) +
                                                ": bad timestamp: " + line);
      }
      stamps.push_back(static_cast<double>(micros) * 1e-6);
      ++with_stamp;
    }
  }
  if (with_stamp != 0 && with_stamp != readings.size()) {
    throw Error(Errc::kInvalidArgument, "trace mixes lines with and without timestamps");
  }
  if (timestamps_s != nullptr) *timestamps_s = std::move(stamps);
  return readings;
}

ReplayTraceBackend::ReplayTraceBackend(std::vector<std::uint64_t> readings, Options options)
    : ReplayTraceBackend(std::move(readings), {}, options) {}

ReplayTraceBackend::ReplayTraceBackend(std::vector<std::uint64_t> readings,
                                       std::vector<double> timestamps_s, Options options)
    : readings_(std::move(readings)), timestamps_s_(std::move(timestamps_s)), options_(options) {
  if (options_.max_counter == 0) {
    throw Error(Errc::kInvalidArgument, "replay trace: max_counter must be positive");
  }
  if (!timestamps_s_.empty() && timestamps_s_.size() != readings_.size()) {
    throw Error(Errc::kInvalidArgument, "replay trace: timestamp count mismatch");
  }
}

ReplayTraceBackend ReplayTraceBackend::from_file(const fs::path& path, Options options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kBackendUnavailable, "cannot open replay trace " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::vector<double> stamps;
  auto readings = parse_counter_trace(buffer.str(), &stamps);
  return ReplayTraceBackend(std::move(readings), std::move(stamps), options);
}

CounterReading ReplayTraceBackend::read() {
  if (position_ >= readings_.size()) {
    if (!options_.cycle || readings_.empty()) {
      throw Error(Errc::kBackendUnavailable, "replay trace exhausted after " +
                                                 std::to_string(readings_.size()) + " readings");
    }
    position_ = 0;
    ++cycles_;
  }
  const std::uint64_t value = readings_[position_];
  if (value >= options_.max_counter) {
    throw Error(Errc::kCorruptCounter, "trace reading " + std::to_string(value) +
                                           " not below max " +
                                           std::to_string(options_.max_counter));
  }
  double stamp = 0.0;
  if (timestamps_s_.empty()) {
    const auto index = cycles_ * readings_.size() + position_;
    stamp = static_cast<double>(index) * options_.sample_interval_s;
  } else {
    const double span = timestamps_s_.back() - timestamps_s_.front() + options_.sample_interval_s;
    stamp = timestamps_s_[position_] + static_cast<double>(cycles_) * span;
  }
  ++position_;
  return {value, stamp + idle_offset_s_};
}

void ReplayTraceBackend::idle(double seconds) { idle_offset_s_ += seconds; }

SyntheticSampler::SyntheticSampler(Options options)
    : options_(options), rng_(options.seed), noise_(0.0, 1.0) {
  if (options_.max_counter == 0) {
    throw Error(Errc::kInvalidArgument, "synthetic sampler: max_counter must be positive");
  }
}

CounterReading SyntheticSampler::read() {
  const auto total = static_cast<std::uint64_t>(std::floor(energy_uj_));
  return {total % options_.max_counter, time_s_};
}

void SyntheticSampler::idle(double seconds) {
  energy_uj_ += options_.idle_power_w * seconds * 1e6;
  time_s_ += seconds;
}

void SyntheticSampler::workload_finished() {
  const double draw =
      options_.workload_energy_mean_j + options_.workload_energy_stddev_j * noise_(rng_);
  const double idle_part = options_.idle_power_w * options_.workload_seconds;
  // A physical counter never runs backwards.
  energy_uj_ += std::max(0.0, draw + idle_part) * 1e6;
  time_s_ += options_.workload_seconds;
}

}  // namespace decbench::meter
