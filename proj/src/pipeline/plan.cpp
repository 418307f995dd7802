#include "decbench/pipeline/plan.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "decbench/error.hpp"

namespace decbench::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

const char* class_name(SequenceClass c) {
  switch (c) {
    case SequenceClass::kA1: return "A1";
    case SequenceClass::kA2: return "A2";
    case SequenceClass::kB: return "B";
    case SequenceClass::kC: return "C";
    case SequenceClass::kD: return "D";
    case SequenceClass::kE: return "E";
    case SequenceClass::kF: return "F";
  }
  return "?";
}

std::optional<SequenceClass> parse_class(const std::string& name) {
  static const std::map<std::string, SequenceClass> table{
      {"A1", SequenceClass::kA1}, {"A2", SequenceClass::kA2}, {"B", SequenceClass::kB},
      {"C", SequenceClass::kC},   {"D", SequenceClass::kD},   {"E", SequenceClass::kE},
      {"F", SequenceClass::kF}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* config_name(CodingConfig c) {
  switch (c) {
    case CodingConfig::kAI: return "AI";
    case CodingConfig::kLB: return "LB";
    case CodingConfig::kRA: return "RA";
  }
  return "?";
}

std::optional<CodingConfig> parse_config(const std::string& name) {
  if (name == "AI") return CodingConfig::kAI;
  if (name == "LB") return CodingConfig::kLB;
  if (name == "RA") return CodingConfig::kRA;
  return std::nullopt;
}

bool config_applicable(SequenceClass cls, CodingConfig config) {
  if (config == CodingConfig::kLB) {
    return cls != SequenceClass::kA1 && cls != SequenceClass::kA2;
  }
  if (config == CodingConfig::kRA) return cls != SequenceClass::kE;
  return true;
}

std::string CodecVariant::config_value(CodingConfig config) const {
  auto it = config_files.find(config);
  return it == config_files.end() ? config_name(config) : it->second;
}

bool CodecVariant::runs_config(CodingConfig config) const {
  if (configs.empty()) return true;
  for (auto c : configs) {
    if (c == config) return true;
  }
  return false;
}

const SequenceEntry& ExperimentPlan::sequence(const std::string& name) const {
  for (const auto& s : sequences) {
    if (s.name == name) return s;
  }
  throw Error(Errc::kNotFound, "no sequence named '" + name + "' in plan");
}

const CodecVariant& ExperimentPlan::variant(const std::string& id) const {
  for (const auto& v : variants) {
    if (v.variant_id == id) return v;
  }
  throw Error(Errc::kNotFound, "no variant '" + id + "' in plan");
}

const CodecVariant& ExperimentPlan::reference_variant() const {
  for (const auto& v : variants) {
    if (v.role == VariantRole::kReference) return v;
  }
  throw Error(Errc::kNotFound, "plan has no reference variant");
}

namespace {

class Problems {
 public:
  void add(std::string msg) { list_.push_back(std::move(msg)); }
  bool empty() const { return list_.empty(); }
  std::string joined() const {
    std::string out;
    for (const auto& p : list_) out += p + "\n";
    return out;
  }

 private:
  std::vector<std::string> list_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <typename T>
std::optional<T> get(const json& obj, const char* key, const std::string& where, Problems& problems) {
  if (!obj.contains(key)) {
    problems.add(where + ": missing field '" + key + "'");
    return std::nullopt;
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    problems.add(where + ": field '" + key + "' has the wrong type");
    return std::nullopt;
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where,
         Problems& problems) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    problems.add(where + ": field '" + key + "' has the wrong type");
    return fallback;
  }
}

void parse_sequences(const json& root, ExperimentPlan& plan, Problems& problems) {
  if (!root.contains("sequences") || !root["sequences"].is_array()) {
    problems.add("plan: 'sequences' must be an array");
    return;
  }
  std::set<std::string> names;
  std::size_t index = 0;
  for (const auto& js : root["sequences"]) {
    const std::string where = "sequences[" + std::to_string(index++) + "]";
    if (!js.is_object()) {
      problems.add(where + ": not an object");
      continue;
    }
    SequenceEntry s;
    s.name = get<std::string>(js, "name", where, problems).value_or("");
    const std::string label = s.name.empty() ? where : "sequence '" + s.name + "'";
    if (!s.name.empty() && !names.insert(s.name).second) {
      problems.add(label + ": duplicate sequence name");
    }
    const auto cls = get<std::string>(js, "class", label, problems);
    if (cls) {
      if (auto parsed = parse_class(*cls)) {
        s.sequence_class = *parsed;
      } else {
        problems.add(label + ": unknown class '" + *cls + "' (expected A1, A2, B, C, D, E, F)");
      }
    }
    s.spec.width = get<int>(js, "width", label, problems).value_or(0);
    s.spec.height = get<int>(js, "height", label, problems).value_or(0);
    s.spec.bit_depth = get_or<int>(js, "bit_depth", 8, label, problems);
    s.spec.frame_count = get<std::size_t>(js, "frames", label, problems).value_or(0);
    s.frame_rate = get<double>(js, "frame_rate", label, problems).value_or(0.0);
    if (!(s.frame_rate > 0.0)) problems.add(label + ": frame_rate must be positive");
    bool spec_ok = true;
    try {
      s.spec.validate();
    } catch (const Error& e) {
      problems.add(label + ": " + e.what());
      spec_ok = false;
    }
    if (auto path = get<std::string>(js, "path", label, problems)) {
      s.source_path = resolve(plan.plan_dir, *path);
      std::error_code ec;
      const auto size = fs::file_size(s.source_path, ec);
      if (ec) {
        problems.add(label + ": missing source file " + s.source_path.string());
      } else if (spec_ok && (size < s.spec.file_bytes() || size % s.spec.frame_bytes() != 0)) {
        problems.add(label + ": source file " + s.source_path.string() + " has " +
                     std::to_string(size) + " bytes, not a whole number of frames covering " +
                     std::to_string(s.spec.frame_count) + " frames of " +
                     std::to_string(s.spec.frame_bytes()) + " bytes");
      }
    }
    plan.sequences.push_back(std::move(s));
  }
}

CommandTemplate parse_command(const json& j, const char* key, const std::string& where,
                              Problems& problems) {
  if (!j.contains(key)) {
    problems.add(where + ": missing field '" + key + "'");
    return {};
  }
  const auto& value = j.at(key);
  if (value.is_array()) {
    try {
      return CommandTemplate(value.get<std::vector<std::string>>());
    } catch (const json::exception&) {
    }
  }
  problems.add(where + ": '" + key + "' must be an array of strings (argument vector)");
  return {};
}

void parse_variants(const json& root, ExperimentPlan& plan, Problems& problems) {
  if (!root.contains("variants") || !root["variants"].is_array()) {
    problems.add("plan: 'variants' must be an array");
    return;
  }
  std::set<std::string> ids;
  int references = 0;
  std::size_t index = 0;
  for (const auto& jv : root["variants"]) {
    const std::string where = "variants[" + std::to_string(index++) + "]";
    if (!jv.is_object()) {
      problems.add(where + ": not an object");
      continue;
    }
    CodecVariant v;
    v.variant_id = get<std::string>(jv, "id", where, problems).value_or("");
    const std::string label = v.variant_id.empty() ? where : "variant '" + v.variant_id + "'";
    if (!v.variant_id.empty() && !ids.insert(v.variant_id).second) {
      problems.add(label + ": duplicate variant_id");
    }
    const std::string role = get_or<std::string>(jv, "role", "test", label, problems);
    if (role == "reference") {
      v.role = VariantRole::kReference;
      ++references;
    } else if (role != "test") {
      problems.add(label + ": role must be 'reference' or 'test'");
    }
    v.encoder_command = parse_command(jv, "encoder", label, problems);
    v.decoder_command = parse_command(jv, "decoder", label, problems);
    for (const auto& p : v.encoder_command.check(encoder_placeholders(), {"output"})) {
      problems.add(label + ": encoder template: " + p);
    }
    for (const auto& p : v.decoder_command.check(decoder_placeholders(), {"bitstream", "output"})) {
      problems.add(label + ": decoder template: " + p);
    }
    v.tool_overrides =
        get_or<std::vector<std::string>>(jv, "tool_overrides", {}, label, problems);
    const auto files =
        get_or<std::map<std::string, std::string>>(jv, "config_files", {}, label, problems);
    for (const auto& [name, file] : files) {
      if (auto c = parse_config(name)) {
        v.config_files[*c] = resolve(plan.plan_dir, file).string();
      } else {
        problems.add(label + ": config_files: unknown configuration '" + name + "'");
      }
    }
    for (const auto& name : get_or<std::vector<std::string>>(jv, "configs", {}, label, problems)) {
      if (auto c = parse_config(name)) {
        v.configs.push_back(*c);
      } else {
        problems.add(label + ": unknown configuration '" + name + "'");
      }
    }
    plan.variants.push_back(std::move(v));
  }
  if (references != 1) {
    problems.add("plan: exactly one variant must have role 'reference', found " +
                 std::to_string(references));
  }
}

void parse_measurement(const json& root, ExperimentPlan& plan, Problems& problems) {
  if (!root.contains("measurement")) return;
  const json& jm = root["measurement"];
  const std::string where = "measurement";
  auto& m = plan.measurement;
  m.rule.alpha = get_or<double>(jm, "alpha", m.rule.alpha, where, problems);
  m.rule.beta = get_or<double>(jm, "beta", m.rule.beta, where, problems);
  m.rule.min_iterations =
      get_or<std::size_t>(jm, "min_iterations", m.rule.min_iterations, where, problems);
  m.rule.max_iterations =
      get_or<std::size_t>(jm, "max_iterations", m.rule.max_iterations, where, problems);
  try {
    m.rule.validate();
  } catch (const Error& e) {
    problems.add(e.what());
  }

  if (jm.contains("backend")) {
    const json& jb = jm["backend"];
    const std::string bw = "measurement.backend";
    const std::string kind = get_or<std::string>(jb, "kind", "rapl-sysfs", bw, problems);
    auto& b = m.backend;
    b.max_counter = get_or<std::uint64_t>(jb, "max_counter", 0, bw, problems);
    if (kind == "rapl-sysfs") {
      b.kind = meter::BackendKind::kRaplSysfs;
      b.path = get_or<std::string>(jb, "path", meter::RaplSysfsBackend::kDefaultDomain, bw,
                                   problems);
    } else if (kind == "replay-trace") {
      b.kind = meter::BackendKind::kReplayTrace;
      if (auto trace = get<std::string>(jb, "trace", bw, problems)) {
        b.path = resolve(plan.plan_dir, *trace);
        if (!fs::exists(b.path)) problems.add(bw + ": trace file " + b.path.string() + " not found");
      }
      b.replay.cycle = get_or<bool>(jb, "cycle", false, bw, problems);
      b.replay.sample_interval_s =
          get_or<double>(jb, "sample_interval_s", b.replay.sample_interval_s, bw, problems);
      if (b.max_counter != 0) b.replay.max_counter = b.max_counter;
    } else if (kind == "synthetic-sampler") {
      b.kind = meter::BackendKind::kSyntheticSampler;
      auto& s = b.synthetic;
      s.idle_power_w = get_or<double>(jb, "idle_power_w", 0.0, bw, problems);
      s.workload_energy_mean_j = get_or<double>(jb, "energy_mean_j", 0.0, bw, problems);
      s.workload_energy_stddev_j = get_or<double>(jb, "energy_stddev_j", 0.0, bw, problems);
      s.workload_seconds = get_or<double>(jb, "workload_s", 1.0, bw, problems);
      s.seed = get_or<std::uint64_t>(jb, "seed", 0, bw, problems);
      if (b.max_counter != 0) s.max_counter = b.max_counter;
    } else {
      problems.add(bw + ": unknown kind '" + kind +
                   "' (expected rapl-sysfs, replay-trace, synthetic-sampler)");
    }
  }

  if (jm.contains("idle")) {
    const json& ji = jm["idle"];
    const std::string iw = "measurement.idle";
    if (ji.contains("power_w")) m.idle.power_w = get_or<double>(ji, "power_w", 0.0, iw, problems);
    if (ji.contains("calibrate_s")) {
      m.idle.calibrate_s = get_or<double>(ji, "calibrate_s", 0.0, iw, problems);
      if (!(*m.idle.calibrate_s > 0.0)) problems.add(iw + ": calibrate_s must be positive");
    }
    if (ji.contains("baseline_file")) {
      m.idle.baseline_file =
          resolve(plan.plan_dir, get_or<std::string>(ji, "baseline_file", "", iw, problems));
    }
    if (m.idle.power_w && *m.idle.power_w < 0.0) problems.add(iw + ": power_w must be >= 0");
  }
}

}  // namespace

ExperimentPlan parse_plan(const std::string& json_text, const fs::path& plan_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kPlanValidation, std::string("plan is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(Errc::kPlanValidation, "plan must be a JSON object");

  Problems problems;
  ExperimentPlan plan;
  plan.plan_dir = plan_dir;
  plan.work_dir = resolve(plan_dir, get_or<std::string>(root, "work_dir", "work", "plan", problems));
  plan.encode_workers = get_or<int>(root, "encode_workers", 1, "plan", problems);
  if (plan.encode_workers < 1) problems.add("plan: encode_workers must be >= 1");
  plan.keep_decoded = get_or<bool>(root, "keep_decoded", false, "plan", problems);

  parse_sequences(root, plan, problems);
  parse_variants(root, plan, problems);

  const auto configs = get_or<std::vector<std::string>>(root, "configs", {"AI", "LB", "RA"},
                                                        "plan", problems);
  for (const auto& name : configs) {
    if (auto c = parse_config(name)) {
      plan.configs.push_back(*c);
    } else {
      problems.add("plan: unknown configuration '" + name + "' (expected AI, LB, RA)");
    }
  }
  plan.qps = get_or<std::vector<int>>(root, "qps", plan.qps, "plan", problems);
  std::set<int> distinct(plan.qps.begin(), plan.qps.end());
  if (distinct.size() != plan.qps.size()) problems.add("plan: duplicate QP values");
  if (plan.qps.size() < 4) problems.add("plan: at least 4 QPs are needed for BD curves");
  for (int qp : plan.qps) {
    if (qp < 0 || qp > 63) problems.add("plan: QP " + std::to_string(qp) + " out of range");
  }

  parse_measurement(root, plan, problems);

  if (!problems.empty()) throw Error(Errc::kPlanValidation, problems.joined());
  return plan;
}

ExperimentPlan load_plan(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kPlanValidation, "cannot read plan file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const fs::path dir = fs::absolute(path).parent_path();
  return parse_plan(buffer.str(), dir);
}

std::unique_ptr<meter::PowerBackend> make_backend(const BackendSettings& settings) {
  switch (settings.kind) {
    case meter::BackendKind::kRaplSysfs:
      return std::make_unique<meter::RaplSysfsBackend>(settings.path, settings.max_counter);
    case meter::BackendKind::kReplayTrace:
      return std::make_unique<meter::ReplayTraceBackend>(
          meter::ReplayTraceBackend::from_file(settings.path, settings.replay));
    case meter::BackendKind::kSyntheticSampler:
      return std::make_unique<meter::SyntheticSampler>(settings.synthetic);
  }
  throw Error(Errc::kInvalidArgument, "unknown backend kind");
}

meter::IdleBaseline resolve_idle(const IdleSettings& settings, meter::PowerBackend& backend) {
  if (settings.power_w) return {*settings.power_w, 0.0, 0};
  if (!settings.baseline_file.empty()) return load_baseline(settings.baseline_file);
  if (settings.calibrate_s) return meter::calibrate_idle(backend, *settings.calibrate_s);
  return {};
}

void save_baseline(const meter::IdleBaseline& baseline, const fs::path& path) {
  json j{{"idle_power_w", baseline.idle_power_w},
         {"calibration_duration_s", baseline.calibration_duration_s},
         {"captured_at", baseline.captured_at}};
  std::ofstream out(path);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

meter::IdleBaseline load_baseline(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kNotFound, "cannot read idle baseline " + path.string());
  try {
    const json j = json::parse(in);
    meter::IdleBaseline b;
    b.idle_power_w = j.at("idle_power_w").get<double>();
    b.calibration_duration_s = j.value("calibration_duration_s", 0.0);
    b.captured_at = j.value("captured_at", 0LL);
    if (b.idle_power_w < 0.0) throw Error(Errc::kInvalidArgument, "negative idle power");
    return b;
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, "bad idle baseline " + path.string() + ": " + e.what());
  }
}

}  // namespace decbench::pipeline
