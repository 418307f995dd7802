#pragma once

#include <cstddef>
#include <filesystem>

#include "decbench/quality/yuv.hpp"

namespace decbench::quality {

/// Peak sample value used in the PSNR numerator.
enum class PeakConvention {
  /// 2^bit_depth - 1 (255 at 8 bit, 1023 at 10 bit).
  kFullRange,
  /// 255 << (bit_depth - 8), the convention of the HM/VTM reference software
  /// (1020 at 10 bit). Keeps PSNR invariant under 8 -> 10 bit embedding.
  kScaled8Bit,
};

struct PsnrOptions {
  /// Ceiling applied to every PSNR value; lossless frames report exactly this.
  double clamp_db = 999.0;
  PeakConvention peak = PeakConvention::kFullRange;
};

double peak_value(int bit_depth, PeakConvention convention);

struct FramePsnr {
  double db = 0.0;
  bool clamped = false;
};

FramePsnr frame_psnr(PlaneView ref, PlaneView dec, double peak, double clamp_db = 999.0);
FramePsnr frame_psnr(PlaneView ref, PlaneView dec, int bit_depth, const PsnrOptions& options = {});

/// Luma weighted 6:1:1 against the two chroma components.
inline double yuv_psnr(double y, double u, double v) { return (6.0 * y + u + v) / 8.0; }

struct SequencePsnr {
  double psnr_y = 0.0;
  double psnr_u = 0.0;
  double psnr_v = 0.0;
  double psnr_yuv = 0.0;
  /// Frame-component PSNRs that hit the clamp (zero MSE or above ceiling).
  std::size_t clamped_frames = 0;
};

/// Averages per-frame component PSNRs over a sequence.
class SequencePsnrAccumulator {
 public:
  void add(const FramePsnr& y, const FramePsnr& u, const FramePsnr& v);
  std::size_t frames() const { return frames_; }
  SequencePsnr result() const;

 private:
  double sum_y_ = 0.0, sum_u_ = 0.0, sum_v_ = 0.0;
  std::size_t frames_ = 0;
  std::size_t clamped_ = 0;
};

/// Both files must match `spec` exactly; otherwise Error(kMalformedYuv).
/// With `reference_may_be_longer`, only the first spec.frame_count frames
/// of a longer reference are compared.
SequencePsnr sequence_psnr(const std::filesystem::path& ref_path,
                           const std::filesystem::path& dec_path, const VideoSpec& spec,
                           const PsnrOptions& options = {}, bool reference_may_be_longer = false);

}  // namespace decbench::quality
