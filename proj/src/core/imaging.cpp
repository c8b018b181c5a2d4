#include "core/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cinetrack::imaging {

NormalizedImage normalize_zscore(const Frame& frame) {
  const GridU16& px = frame.pixels;
  if (px.size() == 0) throw ValidationError("normalize_zscore: empty frame");
  uint16_t lo = px.data[0], hi = px.data[0];
  double sum = 0.0;
  for (uint16_t v : px.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  NormalizedImage out;
  out.values = GridF(px.width, px.height);
  if (lo == hi) return out;  // constant frame -> all zeros

  double mean = sum / static_cast<double>(px.size());
  double ss = 0.0;
  for (uint16_t v : px.data) {
    double d = v - mean;
    ss += d * d;
  }
  double stdev = std::sqrt(ss / static_cast<double>(px.size()));
  double inv = 1.0 / std::max(stdev, 1e-8);
  for (size_t i = 0; i < px.size(); ++i) out.values.data[i] = (px.data[i] - mean) * inv;
  return out;
}

RoiTransform roi_from_mask(const Mask& mask, double pad_factor, int target_w, int target_h) {
  if (pad_factor < 1.0) throw ValidationError("pad_factor must be >= 1");
  if (target_w < 16 || target_h < 16) throw ValidationError("target resolution must be >= 16");
  const GridU8& m = mask.labels;
  int bx0 = m.width, bx1 = -1, by0 = m.height, by1 = -1;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.at(y, x)) {
        bx0 = std::min(bx0, x);
        bx1 = std::max(bx1, x);
        by0 = std::min(by0, y);
        by1 = std::max(by1, y);
      }
  if (bx1 < 0) throw ValidationError("empty initial mask");

  double cx = 0.5 * (bx0 + bx1 + 1);
  double cy = 0.5 * (by0 + by1 + 1);
  double ew = (bx1 - bx0 + 1) * pad_factor;
  double eh = (by1 - by0 + 1) * pad_factor;

  // Force target aspect by growing the relatively shorter side.
  double aspect = static_cast<double>(target_w) / target_h;
  if (ew / eh < aspect)
    ew = eh * aspect;
  else
    eh = ew / aspect;

  int w = std::clamp(static_cast<int>(std::lround(ew)), 1, m.width);
  int h = std::clamp(static_cast<int>(std::lround(eh)), 1, m.height);
  int x0 = static_cast<int>(std::floor(cx - w / 2.0 + 0.5));
  int y0 = static_cast<int>(std::floor(cy - h / 2.0 + 0.5));
  x0 = std::clamp(x0, 0, m.width - w);
  y0 = std::clamp(y0, 0, m.height - h);

  return RoiTransform{x0, y0, w, h, target_w, target_h};
}

namespace {

void check_xf(const RoiTransform& xf, int w, int h) {
  if (xf.w <= 0 || xf.h <= 0 || xf.out_w <= 0 || xf.out_h <= 0 || xf.x0 < 0 || xf.y0 < 0 ||
      xf.x0 + xf.w > w || xf.y0 + xf.h > h)
    throw ValidationError("RoiTransform out of bounds for image");
}

}  // namespace

GridF crop_resize(const GridF& image, const RoiTransform& xf) {
  check_xf(xf, image.width, image.height);
  GridF out(xf.out_w, xf.out_h);
  double sx = static_cast<double>(xf.w) / xf.out_w;
  double sy = static_cast<double>(xf.h) / xf.out_h;
  for (int y = 0; y < xf.out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, xf.h - 1.0);
    int y1 = static_cast<int>(fy);
    int y2 = std::min(y1 + 1, xf.h - 1);
    double wy = fy - y1;
    for (int x = 0; x < xf.out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, xf.w - 1.0);
      int x1 = static_cast<int>(fx);
      int x2 = std::min(x1 + 1, xf.w - 1);
      double wx = fx - x1;
      double v00 = image.at(xf.y0 + y1, xf.x0 + x1);
      double v01 = image.at(xf.y0 + y1, xf.x0 + x2);
      double v10 = image.at(xf.y0 + y2, xf.x0 + x1);
      double v11 = image.at(xf.y0 + y2, xf.x0 + x2);
      out.at(y, x) = (1 - wy) * ((1 - wx) * v00 + wx * v01) + wy * ((1 - wx) * v10 + wx * v11);
    }
  }
  return out;
}

GridU8 crop_resize(const GridU8& mask, const RoiTransform& xf) {
  check_xf(xf, mask.width, mask.height);
  GridU8 out(xf.out_w, xf.out_h);
  double sx = static_cast<double>(xf.w) / xf.out_w;
  double sy = static_cast<double>(xf.h) / xf.out_h;
  for (int y = 0; y < xf.out_h; ++y) {
    int sy_i = std::min(static_cast<int>((y + 0.5) * sy), xf.h - 1);
    for (int x = 0; x < xf.out_w; ++x) {
      int sx_i = std::min(static_cast<int>((x + 0.5) * sx), xf.w - 1);
      out.at(y, x) = mask.at(xf.y0 + sy_i, xf.x0 + sx_i);
    }
  }
  return out;
}

Mask uncrop_mask(const GridU8& working, const RoiTransform& xf, int src_w, int src_h,
                 int frame_index) {
  if (!working.same_shape(xf.out_w, xf.out_h))
    throw ValidationError("uncrop_mask: working mask does not match transform target");
  Mask out;
  out.index = frame_index;
  out.labels = GridU8(src_w, src_h, 0);
  double sx = static_cast<double>(xf.out_w) / xf.w;
  double sy = static_cast<double>(xf.out_h) / xf.h;
  for (int y = 0; y < xf.h; ++y) {
    int wy = std::min(static_cast<int>((y + 0.5) * sy), xf.out_h - 1);
    for (int x = 0; x < xf.w; ++x) {
      int wx = std::min(static_cast<int>((x + 0.5) * sx), xf.out_w - 1);
      out.labels.at(xf.y0 + y, xf.x0 + x) = working.at(wy, wx) ? 1 : 0;
    }
  }
  return out;
}

namespace {

struct InverseAffine {
  double m00, m01, m10, m11, cx, cy, dx, dy;

  static InverseAffine from(const AffineParams& p, int w, int h) {
    if (p.scale <= 0.0) throw ValidationError("affine scale must be > 0");
    double th = p.rotation_deg * M_PI / 180.0;
    // Forward: rotate about center, scale, translate. Inverse applied here.
    double c = std::cos(th), s = std::sin(th);
    double inv = 1.0 / p.scale;
    return InverseAffine{c * inv, s * inv, -s * inv, c * inv,
                         (w - 1) / 2.0, (h - 1) / 2.0, p.dx, p.dy};
  }

  void map(double x, double y, double& sx, double& sy) const {
    double ux = x - dx - cx;
    double uy = y - dy - cy;
    sx = m00 * ux + m01 * uy + cx;
    sy = m10 * ux + m11 * uy + cy;
  }
};

}  // namespace

GridF apply_affine(const GridF& image, const AffineParams& params) {
  auto inv = InverseAffine::from(params, image.width, image.height);
  double fill = std::numeric_limits<double>::infinity();
  for (double v : image.data) fill = std::min(fill, v);
  if (image.data.empty()) fill = 0.0;

  GridF out(image.width, image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      double sx, sy;
      inv.map(x, y, sx, sy);
      double v;
      if (sx < 0 || sy < 0 || sx > image.width - 1 || sy > image.height - 1) {
        v = fill;
      } else {
        int x1 = static_cast<int>(sx), y1 = static_cast<int>(sy);
        int x2 = std::min(x1 + 1, image.width - 1);
        int y2 = std::min(y1 + 1, image.height - 1);
        double wx = sx - x1, wy = sy - y1;
        v = (1 - wy) * ((1 - wx) * image.at(y1, x1) + wx * image.at(y1, x2)) +
            wy * ((1 - wx) * image.at(y2, x1) + wx * image.at(y2, x2));
      }
      out.at(y, x) = params.gain * v + params.bias;
    }
  return out;
}

GridU8 apply_affine_mask(const GridU8& mask, const AffineParams& params) {
  auto inv = InverseAffine::from(params, mask.width, mask.height);
  GridU8 out(mask.width, mask.height, 0);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      double sx, sy;
      inv.map(x, y, sx, sy);
      int xi = static_cast<int>(std::lround(sx));
      int yi = static_cast<int>(std::lround(sy));
      if (xi >= 0 && yi >= 0 && xi < mask.width && yi < mask.height)
        out.at(y, x) = mask.at(yi, xi);
    }
  return out;
}

}  // namespace cinetrack::imaging
