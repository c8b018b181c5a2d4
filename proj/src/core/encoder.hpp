#ifndef CINETRACK_ENCODER_HPP
#define CINETRACK_ENCODER_HPP

#include "core/imaging.hpp"
#include "core/types.hpp"

namespace cinetrack::encoder {

// Deterministic multi-scale descriptor encoder. Key channels per feature
// site, for each window size in {3, 7, 15}: local mean, local stdev,
// gradient-x, gradient-y, Laplacian of the local mean (C_k = 15).
// Value channels: [label probability mean-pooled to stride, its complement,
// local mean at window 7] (C_v = 3).
inline constexpr int kKeyDim = 15;
inline constexpr int kValueDim = 3;
inline constexpr int kWindows[3] = {3, 7, 15};

struct EncoderSpec {
  int stride = 4;
  int key_dim = kKeyDim;
  int value_dim = kValueDim;
};

struct FeatureGrid {
  int width = 0;   // sites per row  (W_r / stride)
  int height = 0;  // sites per column
  int key_dim = 0;
  int value_dim = 0;
  int stride = 0;
  int frame_index = -1;
  std::vector<double> keys;    // site-major: [site * key_dim + c]
  std::vector<double> values;  // site-major: [site * value_dim + c]

  int sites() const { return width * height; }
};

// Keys only; the value grid is zeroed.
FeatureGrid encode_query(const imaging::NormalizedImage& image, const EncoderSpec& spec,
                         int frame_index);

// Keys identical to encode_query on the same image.
FeatureGrid encode_memory(const imaging::NormalizedImage& image, const GridF& mask_prob,
                          const EncoderSpec& spec, int frame_index);

}  // namespace cinetrack::encoder

#endif
