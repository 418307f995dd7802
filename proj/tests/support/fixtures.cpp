#include "fixtures.hpp"

#include <stdlib.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "decbench/pipeline/jobs.hpp"
#include "decbench/pipeline/plan.hpp"
#include "decbench/process.hpp"

namespace fs = std::filesystem;

namespace decbench::testing {

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "decbench-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<quality::Frame> pattern_frames(const quality::VideoSpec& spec, unsigned seed) {
  std::mt19937 rng(seed);
  const int max = (1 << spec.bit_depth) - 1;
  const double scale = max / 255.0;
  std::vector<quality::Frame> frames;
  for (std::size_t f = 0; f < spec.frame_count; ++f) {
    auto frame = quality::make_frame(spec);
    for (quality::Plane* p : {&frame.y, &frame.u, &frame.v}) {
      for (int y = 0; y < p->height; ++y) {
        for (int x = 0; x < p->width; ++x) {
          const double base = 128 + 60 * std::sin(0.35 * x + 0.2 * y + 0.5 * static_cast<double>(f)) +
                              25 * std::cos(0.9 * x * y / (p->width + 1.0));
          const double noise = std::uniform_real_distribution<double>(-20, 20)(rng);
          const long v = std::lround((base + noise) * scale);
          p->samples[static_cast<std::size_t>(y) * p->width + x] =
              static_cast<std::uint16_t>(std::clamp<long>(v, 0, max));
        }
      }
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

void write_yuv(const fs::path& path, const std::vector<quality::Frame>& frames, int bit_depth) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  for (const auto& f : frames) quality::write_frame(out, f, bit_depth);
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path mock_codec_path() { return DECBENCH_MOCK_CODEC; }
fs::path cli_path() { return DECBENCH_CLI; }

namespace {

struct SourceDef {
  const char* name;
  const char* cls;
  int bit_depth;
};

constexpr SourceDef kSources[] = {
    {"Arbor", "A1", 10},
    {"Market", "B", 8},
    {"Talker", "E", 8},
};

nlohmann::json plan_json(const fs::path& inputs, const fs::path& run_dir) {
  using nlohmann::json;
  json sequences = json::array();
  for (const auto& s : kSources) {
    sequences.push_back({{"name", s.name},
                         {"class", s.cls},
                         {"path", (inputs / (std::string(s.name) + ".yuv")).string()},
                         {"width", 32},
                         {"height", 32},
                         {"bit_depth", s.bit_depth},
                         {"frames", 2},
                         {"frame_rate", 30.0}});
  }
  const std::string codec = mock_codec_path().string();
  const json encoder = {codec,     "encode",   "{input}",  "{output}",    "{qp}",
                        "{width}", "{height}", "{frames}", "{bitdepth}", "{extra_flags}"};
  const json decoder = {codec, "decode", "{bitstream}", "{output}"};
  return {
      {"work_dir", (run_dir / "work").string()},
      {"encode_workers", 3},
      {"sequences", sequences},
      {"variants",
       json::array({{{"id", "anchor"}, {"role", "reference"}, {"encoder", encoder}, {"decoder", decoder}},
                    {{"id", "tools-off"},
                     {"role", "test"},
                     {"encoder", encoder},
                     {"decoder", decoder},
                     {"tool_overrides", {"--ALF=0", "--DMVR=0"}}}})},
      {"configs", {"AI", "LB", "RA"}},
      {"qps", {22, 27, 32, 37}},
      {"measurement",
       {{"alpha", 0.99},
        {"beta", 0.02},
        {"min_iterations", 3},
        {"max_iterations", 10},
        {"backend", {{"kind", "replay-trace"}, {"trace", (inputs / "trace.txt").string()}}},
        {"idle", {{"power_w", 0.0}}}}},
  };
}

// Energy (J) and time (s) of one decode; falls with QP, higher for the
// tool-off variant, varies per sequence and configuration.
std::pair<double, double> job_cost(const pipeline::JobRecord& job, std::size_t seq_index) {
  const double qp_factor = std::pow(2.0, (37 - job.qp) / 12.0);
  const double variant = job.variant_id == "anchor" ? 1.0 : 0.9 - 0.02 * seq_index;
  const double cfg = 1.0 + 0.1 * static_cast<int>(job.config);
  const double energy = (4.0 + seq_index) * qp_factor * variant * cfg;
  const double time = (0.5 + 0.1 * seq_index) * std::pow(qp_factor, 0.8) * variant * cfg;
  return {energy, time};
}

void write_trace(const pipeline::ExperimentPlan& plan, const fs::path& path,
                 std::size_t iterations) {
  std::ostringstream out;
  out << "# energy_uj time_us\n";
  std::uint64_t counter = 1'000'000;
  std::uint64_t clock = 0;
  for (const auto& job : pipeline::plan_jobs(plan).jobs) {
    std::size_t index = 0;
    while (plan.sequences[index].name != job.sequence) ++index;
    const auto [energy, time] = job_cost(job, index);
    const auto e_uj = static_cast<std::uint64_t>(std::llround(energy * 1e6));
    const auto t_us = static_cast<std::uint64_t>(std::llround(time * 1e6));
    for (std::size_t i = 0; i < iterations; ++i) {
      out << counter << ' ' << clock << '\n';
      counter += e_uj;
      clock += t_us;
      out << counter << ' ' << clock << '\n';
    }
  }
  write_file(path, out.str());
}

}  // namespace

EndToEndScenario make_end_to_end(const fs::path& inputs, const fs::path& run_dir) {
  fs::create_directories(inputs);
  fs::create_directories(run_dir);
  const bool fresh = !fs::exists(inputs / "trace.txt");
  if (fresh) {
    unsigned seed = 7;
    for (const auto& s : kSources) {
      quality::VideoSpec spec{32, 32, s.bit_depth, 2};
      write_yuv(inputs / (std::string(s.name) + ".yuv"), pattern_frames(spec, seed++), s.bit_depth);
    }
  }
  // The plan loader checks that the trace exists; the real one needs the job order.
  if (fresh) write_file(inputs / "trace.txt", "");
  EndToEndScenario sc;
  sc.plan_file = run_dir / "plan.json";
  write_file(sc.plan_file, plan_json(inputs, run_dir).dump(2) + "\n");
  const auto plan = pipeline::load_plan(sc.plan_file);
  sc.work_dir = plan.work_dir;
  sc.expected_jobs = pipeline::plan_jobs(plan).jobs.size();
  if (fresh) write_trace(plan, inputs / "trace.txt", plan.measurement.rule.min_iterations);
  return sc;
}

int run_cli(const std::vector<std::string>& args, std::string* output) {
  std::vector<std::string> argv{cli_path().string()};
  argv.insert(argv.end(), args.begin(), args.end());
  const auto r = run_process(argv);
  if (output) *output = r.output;
  return r.exit_code;
}

}  // namespace decbench::testing
