#ifndef CINETRACK_TYPES_HPP
#define CINETRACK_TYPES_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "core/grid.hpp"

namespace cinetrack {

// Thrown for malformed inputs (bad dimensions, empty masks, bad arguments).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for on-disk problems (missing files, bad magic, short reads).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SequenceMeta {
  int width = 0;
  int height = 0;
  int frame_count = 0;
  double pixel_spacing_mm = 1.0;
  bool spacing_known = false;  // false -> metric outputs fall back to pixels
  int bit_depth = 8;           // 8 or 16

  void validate() const {
    if (width < 16 || height < 16)
      throw ValidationError("sequence dimensions must be at least 16x16");
    if (frame_count < 1) throw ValidationError("frame_count must be >= 1");
    if (pixel_spacing_mm <= 0.0) throw ValidationError("pixel_spacing_mm must be > 0");
    if (bit_depth != 8 && bit_depth != 16)
      throw ValidationError("bit_depth must be 8 or 16");
  }

  uint32_t max_value() const { return bit_depth == 8 ? 255u : 65535u; }
};

struct Frame {
  int index = 0;
  GridU16 pixels;
  std::shared_ptr<const SequenceMeta> meta;
};

struct Mask {
  int index = 0;
  GridU8 labels;  // 0 background, 1 foreground

  bool empty() const {
    for (uint8_t v : labels.data)
      if (v) return false;
    return true;
  }
  size_t foreground_count() const {
    size_t n = 0;
    for (uint8_t v : labels.data) n += (v != 0);
    return n;
  }
};

inline void require_same_shape(const Mask& a, const Mask& b, const char* what) {
  if (a.labels.width != b.labels.width || a.labels.height != b.labels.height)
    throw ValidationError(std::string(what) + ": mask dimension mismatch");
}

}  // namespace cinetrack

#endif
