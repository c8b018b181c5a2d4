#ifndef CINETRACK_IMAGING_HPP
#define CINETRACK_IMAGING_HPP

#include "core/types.hpp"

namespace cinetrack::imaging {

struct NormalizedImage {
  GridF values;
};

// Crop rectangle in source coordinates plus the working-resolution target.
// Fixed once per sequence from the first-frame mask.
struct RoiTransform {
  int x0 = 0, y0 = 0, w = 0, h = 0;
  int out_w = 0, out_h = 0;
};

struct AffineParams {
  double rotation_deg = 0.0;
  double dx = 0.0, dy = 0.0;
  double scale = 1.0;
  double gain = 1.0;
  double bias = 0.0;
};

// Zero mean, unit variance; constant frames map to all zeros.
NormalizedImage normalize_zscore(const Frame& frame);

// Tight foreground bbox expanded by pad_factor per side, aspect forced to
// the target aspect by growing the shorter side, then clamped in bounds.
// The expanded rectangle is centered on the bbox center: for extent e the
// origin is floor(center - e/2 + 0.5).
RoiTransform roi_from_mask(const Mask& mask, double pad_factor, int target_w, int target_h);

GridF crop_resize(const GridF& image, const RoiTransform& xf);   // bilinear
GridU8 crop_resize(const GridU8& mask, const RoiTransform& xf);  // nearest

// Nearest-neighbor map back into the crop rectangle; outside -> background.
Mask uncrop_mask(const GridU8& working, const RoiTransform& xf, int src_w, int src_h,
                 int frame_index);

// Rotation about center, then scale, then translation; bilinear sampling
// with out-of-bounds reads producing the image minimum; gain/bias applied
// to the sampled intensity.
GridF apply_affine(const GridF& image, const AffineParams& params);
GridU8 apply_affine_mask(const GridU8& mask, const AffineParams& params);  // nearest, no gain

}  // namespace cinetrack::imaging

#endif
