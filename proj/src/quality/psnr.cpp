#include "decbench/quality/psnr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decbench/error.hpp"

namespace decbench::quality {

double peak_value(int bit_depth, PeakConvention convention) {
  if (convention == PeakConvention::kScaled8Bit) {
    return 255.0 * static_cast<double>(1 << (bit_depth - 8));
  }
  return static_cast<double>((1 << bit_depth) - 1);
}

FramePsnr frame_psnr(PlaneView ref, PlaneView dec, double peak, double clamp_db) {
  if (ref.width != dec.width || ref.height != dec.height ||
      ref.samples.size() != dec.samples.size()) {
    throw Error(Errc::kInvalidArgument,
                "plane dimensions differ: " + std::to_string(ref.width) + "x" +
                    std::to_string(ref.height) + " vs " + std::to_string(dec.width) + "x" +
                    std::to_string(dec.height));
  }
  if (ref.samples.empty()) throw Error(Errc::kInvalidArgument, "empty plane");

  // Exact integer accumulation; 10-bit squared errors fit comfortably.
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(ref.samples[i]) - dec.samples[i];
    sse += static_cast<std::uint64_t>(d * d);
  }
  if (sse == 0) return {clamp_db, true};
  const double mse = static_cast<double>(sse) / static_cast<double>(ref.samples.size());
  const double db = 10.0 * std::log10(peak * peak / mse);
  if (db >= clamp_db) return {clamp_db, true};
  return {db, false};
}

FramePsnr frame_psnr(PlaneView ref, PlaneView dec, int bit_depth, const PsnrOptions& options) {
  return frame_psnr(ref, dec, peak_value(bit_depth, options.peak), options.clamp_db);
}

void SequencePsnrAccumulator::add(const FramePsnr& y, const FramePsnr& u, const FramePsnr& v) {
  sum_y_ += y.db;
  sum_u_ += u.db;
  sum_v_ += v.db;
  clamped_ += static_cast<std::size_t>(y.clamped) + u.clamped + v.clamped;
  ++frames_;
}

SequencePsnr SequencePsnrAccumulator::result() const {
  if (frames_ == 0) throw Error(Errc::kInvalidArgument, "no frames accumulated");
  SequencePsnr s;
  const auto n = static_cast<double>(frames_);
  s.psnr_y = sum_y_ / n;
  s.psnr_u = sum_u_ / n;
  s.psnr_v = sum_v_ / n;
  s.psnr_yuv = yuv_psnr(s.psnr_y, s.psnr_u, s.psnr_v);
  s.clamped_frames = clamped_;
  return s;
}

SequencePsnr sequence_psnr(const std::filesystem::path& ref_path,
                           const std::filesystem::path& dec_path, const VideoSpec& spec,
                           const PsnrOptions& options, bool reference_may_be_longer) {
  YuvReader ref_reader(ref_path, spec, reference_may_be_longer);
  YuvReader dec_reader(dec_path, spec);
  Frame ref = make_frame(spec);
  Frame dec = make_frame(spec);
  const double peak = peak_value(spec.bit_depth, options.peak);
  SequencePsnrAccumulator acc;
  while (ref_reader.next(ref) && dec_reader.next(dec)) {
    acc.add(frame_psnr(ref.y, dec.y, peak, options.clamp_db),
            frame_psnr(ref.u, dec.u, peak, options.clamp_db),
            frame_psnr(ref.v, dec.v, peak, options.clamp_db));
  }
  return acc.result();
}

}  // namespace decbench::quality
