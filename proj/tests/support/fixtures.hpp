#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "decbench/bd/curve.hpp"
#include "decbench/quality/yuv.hpp"

namespace decbench::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Deterministic textured test picture content.
std::vector<quality::Frame> pattern_frames(const quality::VideoSpec& spec, unsigned seed = 1);
void write_yuv(const std::filesystem::path& path, const std::vector<quality::Frame>& frames,
               int bit_depth);

// Curves read off the published energy-vs-PSNR plot (joules, dB).
inline const std::vector<bd::CurvePoint> kHevcCurve{
    {655.7, 38.03}, {716.1, 40.55}, {803.8, 42.72}, {950.5, 44.45}};
inline const std::vector<bd::CurvePoint> kVvcCurve{
    {1157.7, 39.04}, {1305.5, 41.43}, {1444.8, 43.40}, {1629.8, 44.85}};
inline const std::vector<bd::CurvePoint> kProposedCurve{
    {826.60, 38.89}, {913.13, 41.28}, {1024.5, 43.27}, {1193.4, 44.75}};

/// Paths of helper executables, injected by the build.
std::filesystem::path mock_codec_path();
std::filesystem::path cli_path();

/// A complete mock experiment: three sequences (classes A1, B, E), an anchor
/// and a tool-off variant, configurations AI/LB/RA, and a replay trace with
/// exactly enough readings for every measured decode.
struct EndToEndScenario {
  std::filesystem::path plan_file;
  std::filesystem::path work_dir;
  std::size_t expected_jobs = 0;
};

/// Writes shared inputs (sources, trace) under `inputs` and a plan whose
/// work directory is `run_dir`/work.
EndToEndScenario make_end_to_end(const std::filesystem::path& inputs,
                                 const std::filesystem::path& run_dir);

/// Runs the CLI with `args`; returns the exit code and fills `output`.
int run_cli(const std::vector<std::string>& args, std::string* output = nullptr);

}  // namespace decbench::testing
