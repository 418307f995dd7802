#include "decbench/quality/yuv.hpp"

#include <string>

#include "decbench/error.hpp"

namespace decbench::quality {

void VideoSpec::validate() const {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
    throw Error(Errc::kInvalidArgument, "4:2:0 video needs positive even dimensions, got " +
                                            std::to_string(width) + "x" +
                                            std::to_string(height));
  }
  if (bit_depth != 8 && bit_depth != 10) {
    throw Error(Errc::kInvalidArgument,
                "bit depth must be 8 or 10, got " + std::to_string(bit_depth));
  }
  if (frame_count < 1) throw Error(Errc::kInvalidArgument, "frame count must be >= 1");
}

Frame make_frame(const VideoSpec& spec) {
  Frame f;
  f.y = {spec.width, spec.height, std::vector<std::uint16_t>(spec.luma_samples())};
  f.u = {spec.width / 2, spec.height / 2, std::vector<std::uint16_t>(spec.chroma_samples())};
  f.v = f.u;
  return f;
}

YuvReader::YuvReader(const std::filesystem::path& path, const VideoSpec& spec,
                     bool allow_trailing_frames)
    : spec_(spec) {
  spec_.validate();
  std::error_code ec;
  const auto actual = std::filesystem::file_size(path, ec);
  if (ec) {
    throw Error(Errc::kMalformedYuv, "cannot stat " + path.string() + ": " + ec.message());
  }
  const bool longer_ok = allow_trailing_frames && actual > spec_.file_bytes() &&
                         actual % spec_.frame_bytes() == 0;
  if (actual != spec_.file_bytes() && !longer_ok) {
    throw Error(Errc::kMalformedYuv, path.string() + ": expected " +
                                         std::to_string(spec_.file_bytes()) + " bytes, found " +
                                         std::to_string(actual));
  }
  in_.open(path, std::ios::binary);
  if (!in_) throw Error(Errc::kMalformedYuv, "cannot open " + path.string());
}

void YuvReader::read_plane(Plane& plane) {
  const std::size_t count = plane.samples.size();
  const int bps = spec_.bytes_per_sample();
  scratch_.resize(count * bps);
  in_.read(reinterpret_cast<char*>(scratch_.data()), static_cast<std::streamsize>(scratch_.size()));
  if (!in_) throw Error(Errc::kMalformedYuv, "short read in frame " + std::to_string(frames_read_));
  if (bps == 1) {
    for (std::size_t i = 0; i < count; ++i) plane.samples[i] = scratch_[i];
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      plane.samples[i] =
          static_cast<std::uint16_t>(scratch_[2 * i] | (scratch_[2 * i + 1] << 8));
    }
  }
}

bool YuvReader::next(Frame& frame) {
  if (frames_read_ >= spec_.frame_count) return false;
  if (frame.y.samples.size() != spec_.luma_samples() ||
      frame.u.samples.size() != spec_.chroma_samples()) {
    frame = make_frame(spec_);
  }
  read_plane(frame.y);
  read_plane(frame.u);
  read_plane(frame.v);
  ++frames_read_;
  return true;
}

void write_frame(std::ostream& out, const Frame& frame, int bit_depth) {
  for (const Plane* p : {&frame.y, &frame.u, &frame.v}) {
    if (bit_depth > 8) {
      for (std::uint16_t s : p->samples) {
        const char bytes[2] = {static_cast<char>(s & 0xff), static_cast<char>(s >> 8)};
        out.write(bytes, 2);
      }
    } else {
      for (std::uint16_t s : p->samples) out.put(static_cast<char>(s & 0xff));
    }
  }
}

}  // namespace decbench::quality
