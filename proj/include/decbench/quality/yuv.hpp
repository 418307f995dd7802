#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

namespace decbench::quality {

/// Raw planar 4:2:0 video layout. 8-bit samples take one byte, 10-bit
/// samples a little-endian 16-bit word.
struct VideoSpec {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::size_t frame_count = 1;

  void validate() const;
  int bytes_per_sample() const { return bit_depth > 8 ? 2 : 1; }
  std::size_t luma_samples() const { return static_cast<std::size_t>(width) * height; }
  std::size_t chroma_samples() const { return luma_samples() / 4; }
  std::size_t frame_bytes() const {
    return (luma_samples() + 2 * chroma_samples()) * bytes_per_sample();
  }
  std::uintmax_t file_bytes() const { return frame_bytes() * frame_count; }
};

struct Plane {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> samples;
};

struct PlaneView {
  std::span<const std::uint16_t> samples;
  int width = 0;
  int height = 0;

  PlaneView() = default;
  PlaneView(const Plane& p) : samples(p.samples), width(p.width), height(p.height) {}  // NOLINT
  PlaneView(std::span<const std::uint16_t> s, int w, int h) : samples(s), width(w), height(h) {}
};

struct Frame {
  Plane y, u, v;
};

Frame make_frame(const VideoSpec& spec);

/// Sequential frame reader. The constructor rejects files whose size is not
/// exactly spec.file_bytes() with Error(kMalformedYuv); with
/// `allow_trailing_frames` a longer file holding whole frames is accepted and
/// only its first spec.frame_count frames are read.
class YuvReader {
 public:
  YuvReader(const std::filesystem::path& path, const VideoSpec& spec,
            bool allow_trailing_frames = false);

  /// Fills `frame` with the next frame; false after the last one.
  bool next(Frame& frame);

 private:
  void read_plane(Plane& plane);

  std::ifstream in_;
  VideoSpec spec_;
  std::size_t frames_read_ = 0;
  std::vector<unsigned char> scratch_;
};

void write_frame(std::ostream& out, const Frame& frame, int bit_depth);

}  // namespace decbench::quality
