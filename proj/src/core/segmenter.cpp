#include "core/segmenter.hpp"

#include <algorithm>
#include <cmath>

namespace cinetrack::segmenter {

ProbMap decode(const memory::Readout& readout, const encoder::EncoderSpec& spec,
               int frame_index) {
  if (readout.value_dim < 2)
    throw ValidationError("decode: readout needs at least 2 value channels");
  const int fw = readout.width, fh = readout.height;
  if (fw <= 0 || fh <= 0) throw ValidationError("decode: empty readout grid");
  const int stride = spec.stride;

  GridF site_prob(fw, fh);
  for (int i = 0; i < fw * fh; ++i) {
    double c0 = readout.values[static_cast<size_t>(i) * readout.value_dim];
    double c1 = readout.values[static_cast<size_t>(i) * readout.value_dim + 1];
    site_prob.data[i] = c0 / (c0 + c1 + 1e-8);
  }

  ProbMap out;
  out.frame_index = frame_index;
  out.values = GridF(fw * stride, fh * stride);
  // Site i maps to working pixel i*stride + stride/2, matching the encoder's
  // sampling centers.
  double off = stride / 2;
  for (int y = 0; y < out.values.height; ++y) {
    double fy = (y - off) / stride;
    fy = std::clamp(fy, 0.0, fh - 1.0);
    int y1 = static_cast<int>(fy);
    int y2 = std::min(y1 + 1, fh - 1);
    double wy = fy - y1;
    for (int x = 0; x < out.values.width; ++x) {
      double fx = (x - off) / stride;
      fx = std::clamp(fx, 0.0, fw - 1.0);
      int x1 = static_cast<int>(fx);
      int x2 = std::min(x1 + 1, fw - 1);
      double wx = fx - x1;
      double v = (1 - wy) * ((1 - wx) * site_prob.at(y1, x1) + wx * site_prob.at(y1, x2)) +
                 wy * ((1 - wx) * site_prob.at(y2, x1) + wx * site_prob.at(y2, x2));
      out.values.at(y, x) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace cinetrack::segmenter
