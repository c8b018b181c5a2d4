#ifndef CINETRACK_SEGMENTER_HPP
#define CINETRACK_SEGMENTER_HPP

#include "core/memory.hpp"

namespace cinetrack::segmenter {

struct ProbMap {
  int frame_index = -1;
  GridF values;  // working resolution, every value in [0, 1]
};

// Label transfer: probability at a feature site is value channel 0
// renormalized against channel 1, bilinearly upsampled by the encoder
// stride to working resolution and clamped to [0, 1].
ProbMap decode(const memory::Readout& readout, const encoder::EncoderSpec& spec,
               int frame_index);

}  // namespace cinetrack::segmenter

#endif
