#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decbench/meter/meter.hpp"
#include "decbench/meter/power_backend.hpp"
#include "decbench/pipeline/command_template.hpp"
#include "decbench/quality/yuv.hpp"

namespace decbench::pipeline {

enum class SequenceClass { kA1, kA2, kB, kC, kD, kE, kF };
enum class CodingConfig { kAI, kLB, kRA };

const char* class_name(SequenceClass c);
std::optional<SequenceClass> parse_class(const std::string& name);
const char* config_name(CodingConfig c);
std::optional<CodingConfig> parse_config(const std::string& name);

/// Classes A1/A2 are not coded with LB and class E is not coded with RA.
bool config_applicable(SequenceClass cls, CodingConfig config);

struct SequenceEntry {
  std::string name;
  SequenceClass sequence_class = SequenceClass::kB;
  std::filesystem::path source_path;
  quality::VideoSpec spec;
  double frame_rate = 0.0;
};

enum class VariantRole { kReference, kTest };

struct CodecVariant {
  std::string variant_id;
  VariantRole role = VariantRole::kTest;
  CommandTemplate encoder_command;
  CommandTemplate decoder_command;
  /// Opaque encoder flags appended through {extra_flags}.
  std::vector<std::string> tool_overrides;
  /// Per-configuration value for {config} (usually an encoder .cfg path);
  /// configurations without an entry substitute their name (AI, LB, RA).
  std::map<CodingConfig, std::string> config_files;
  /// Restricts the variant to these configurations; empty means all.
  std::vector<CodingConfig> configs;

  std::string config_value(CodingConfig config) const;
  bool runs_config(CodingConfig config) const;
};

struct BackendSettings {
  meter::BackendKind kind = meter::BackendKind::kRaplSysfs;
  std::filesystem::path path;  // RAPL domain dir or replay trace file
  std::uint64_t max_counter = 0;
  meter::ReplayTraceBackend::Options replay;
  meter::SyntheticSampler::Options synthetic;
};

struct IdleSettings {
  std::optional<double> power_w;
  std::optional<double> calibrate_s;
  std::filesystem::path baseline_file;
};

struct MeasurementSettings {
  meter::StoppingRule rule;
  BackendSettings backend;
  IdleSettings idle;
};

struct ExperimentPlan {
  std::filesystem::path plan_dir;
  std::filesystem::path work_dir;
  std::vector<SequenceEntry> sequences;
  std::vector<CodecVariant> variants;
  std::vector<CodingConfig> configs;
  std::vector<int> qps{22, 27, 32, 37};
  MeasurementSettings measurement;
  int encode_workers = 1;
  bool keep_decoded = false;

  const SequenceEntry& sequence(const std::string& name) const;
  const CodecVariant& variant(const std::string& id) const;
  const CodecVariant& reference_variant() const;
};

/// Parses and validates a plan. All problems are collected and reported in
/// one Error(kPlanValidation), one per line. Relative paths resolve against
/// the plan file's directory.
ExperimentPlan load_plan(const std::filesystem::path& path);
ExperimentPlan parse_plan(const std::string& json_text, const std::filesystem::path& plan_dir);

std::unique_ptr<meter::PowerBackend> make_backend(const BackendSettings& settings);

/// Resolves the idle baseline from the settings, calibrating on `backend`
/// when requested.
meter::IdleBaseline resolve_idle(const IdleSettings& settings, meter::PowerBackend& backend);

void save_baseline(const meter::IdleBaseline& baseline, const std::filesystem::path& path);
meter::IdleBaseline load_baseline(const std::filesystem::path& path);

}  // namespace decbench::pipeline
