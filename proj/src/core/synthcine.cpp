#include "core/synthcine.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include "core/seqio.hpp"

namespace fs = std::filesystem;

namespace cinetrack::synthcine {

namespace {

constexpr double kTau = 2.0 * M_PI;

uint64_t mix(uint64_t seed, uint64_t t) {
  // splitmix64 over (seed, t) so frames can be generated independently.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (t + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Sum of a few seeded low-frequency sinusoids, values in [-1, 1]-ish.
struct Texture {
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> waves;

  explicit Texture(const PhantomSpec& spec) {
    std::mt19937_64 rng(mix(spec.seed, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double norm = 0.0;
    for (int i = 0; i < 6; ++i) {
      Wave w;
      double cycles = 0.5 + 2.5 * u(rng);  // at most 3 cycles across the image
      double angle = kTau * u(rng);
      w.fx = cycles * std::cos(angle) / spec.width;
      w.fy = cycles * std::sin(angle) / spec.height;
      w.phase = kTau * u(rng);
      w.amp = 0.5 + 0.5 * u(rng);
      norm += w.amp;
      waves.push_back(w);
    }
    for (Wave& w : waves) w.amp /= norm;
  }

  double at(int x, int y) const {
    double v = 0.0;
    for (const Wave& w : waves) v += w.amp * std::sin(kTau * (w.fx * x + w.fy * y) + w.phase);
    return v;
  }
};

}  // namespace

void PhantomSpec::validate() const {
  if (width < 16 || height < 16) throw ValidationError("phantom size must be >= 16");
  if (frames < 1) throw ValidationError("frames must be >= 1");
  if (period_frames < 2) throw ValidationError("period must be >= 2 frames");
  if (semi_x < 1.0 || semi_y < 1.0) throw ValidationError("semi-axes must be >= 1 px");
  if (deformation < 0.0 || deformation >= 1.0)
    throw ValidationError("deformation must be in [0, 1)");
  if (noise_sigma < 0.0) throw ValidationError("noise sigma must be >= 0");
  if (bit_depth != 8 && bit_depth != 16) throw ValidationError("bit_depth must be 8 or 16");
  double ax = semi_x * (1.0 + deformation);
  double ay = semi_y * (1.0 + deformation);
  double margin_y = std::abs(amplitude_px) + ay;
  if (center_x - ax < 1.0 || center_x + ax > width - 2.0 || center_y - margin_y < 1.0 ||
      center_y + margin_y > height - 2.0)
    throw ValidationError("ellipse would leave the image given the motion amplitude");
}

SequenceMeta PhantomSpec::meta() const {
  SequenceMeta m;
  m.width = width;
  m.height = height;
  m.frame_count = frames;
  m.bit_depth = bit_depth;
  m.pixel_spacing_mm = 1.0;
  m.spacing_known = true;
  return m;
}

std::pair<Frame, Mask> frame_at(const PhantomSpec& spec, int t) {
  spec.validate();
  if (t < 0 || t >= spec.frames) throw ValidationError("frame index out of range");

  static thread_local std::unique_ptr<Texture> cached;
  static thread_local uint64_t cached_seed = ~0ULL;
  static thread_local int cached_w = -1, cached_h = -1;
  if (!cached || cached_seed != spec.seed || cached_w != spec.width || cached_h != spec.height) {
    cached = std::make_unique<Texture>(spec);
    cached_seed = spec.seed;
    cached_w = spec.width;
    cached_h = spec.height;
  }
  const Texture& tex = *cached;

  double phase = kTau * t / spec.period_frames;
  // Whole-pixel offset keeps the rasterized foreground count constant.
  int offset_y = static_cast<int>(std::lround(spec.amplitude_px * std::sin(phase)));
  double mod = 1.0 + spec.deformation * std::sin(phase + M_PI / 2.0);
  double ax = spec.semi_x * mod;
  double ay = spec.semi_y * mod;
  double cy = spec.center_y + offset_y;

  double gain = 1.0 + spec.drift_per_frame * t;
  double maxv = spec.bit_depth == 8 ? 255.0 : 65535.0;

  std::mt19937_64 rng(mix(spec.seed, static_cast<uint64_t>(t) + 1));
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);

  auto meta = std::make_shared<SequenceMeta>(spec.meta());
  Frame frame{t, GridU16(spec.width, spec.height), meta};
  Mask mask{t, GridU8(spec.width, spec.height, 0)};

  for (int y = 0; y < spec.height; ++y) {
    double ny = (y - cy) / ay;
    for (int x = 0; x < spec.width; ++x) {
      double nx = (x - spec.center_x) / ax;
      bool inside = nx * nx + ny * ny <= 1.0;
      double v = inside ? spec.base_level + spec.contrast
                        : spec.base_level + spec.texture_amp * tex.at(x, y);
      v = gain * v;
      if (spec.noise_sigma > 0.0) v += noise(rng);
      v = std::clamp(std::round(v), 0.0, maxv);
      frame.pixels.at(y, x) = static_cast<uint16_t>(v);
      if (inside) mask.labels.at(y, x) = 1;
    }
  }
  return {std::move(frame), std::move(mask)};
}

std::tuple<SequenceMeta, std::vector<Frame>, std::vector<Mask>> generate(const PhantomSpec& spec) {
  spec.validate();
  std::vector<Frame> frames;
  std::vector<Mask> masks;
  frames.reserve(spec.frames);
  masks.reserve(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    auto [f, m] = frame_at(spec, t);
    frames.push_back(std::move(f));
    masks.push_back(std::move(m));
  }
  return {spec.meta(), std::move(frames), std::move(masks)};
}

void write_phantom(const PhantomSpec& spec, const std::string& dir) {
  spec.validate();
  fs::create_directories(dir);
  seqio::write_meta(dir, spec.meta());
  for (int t = 0; t < spec.frames; ++t) {
    auto [f, m] = frame_at(spec, t);
    seqio::write_frame(f, (fs::path(dir) / seqio::frame_filename(t)).string());
    seqio::write_mask(m, (fs::path(dir) / seqio::mask_filename(t)).string());
  }
}

}  // namespace cinetrack::synthcine
