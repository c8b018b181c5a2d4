#ifndef CINETRACK_SYNTHCINE_HPP
#define CINETRACK_SYNTHCINE_HPP

#include <string>
#include <tuple>
#include <vector>

#include "core/types.hpp"

namespace cinetrack::synthcine {

// Deformable elliptical target over a smooth textured background with
// sinusoidal vertical motion. Fully deterministic for a fixed seed; the
// vertical offset is rounded to whole pixels so the rasterized shape is
// translated exactly frame to frame.
struct PhantomSpec {
  int width = 128, height = 128;
  int frames = 100;
  double center_x = 64.0, center_y = 64.0;
  double semi_x = 18.0, semi_y = 14.0;
  double amplitude_px = 0.0;  // vertical motion amplitude
  int period_frames = 20;
  double deformation = 0.0;   // fractional semi-axis modulation
  double noise_sigma = 0.0;   // additive Gaussian, intensity units
  double drift_per_frame = 0.0;  // multiplicative gain drift fraction
  uint64_t seed = 1;
  int bit_depth = 16;

  // Background texture sits around this level; the target is a flat region
  // at base + contrast before drift and noise.
  double base_level = 1000.0;
  double texture_amp = 200.0;
  double contrast = 800.0;

  void validate() const;
  SequenceMeta meta() const;
};

std::pair<Frame, Mask> frame_at(const PhantomSpec& spec, int t);

std::tuple<SequenceMeta, std::vector<Frame>, std::vector<Mask>> generate(const PhantomSpec& spec);

// Writes frames, ground-truth masks and meta.json in the seqio layout.
void write_phantom(const PhantomSpec& spec, const std::string& dir);

}  // namespace cinetrack::synthcine

#endif
