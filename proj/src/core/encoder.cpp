#include "core/encoder.hpp"

#include <cmath>

namespace cinetrack::encoder {

namespace {

constexpr int kPad = 8;  // max half-window (7) + 1 for derivatives of the mean

int reflect(int i, int n) {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - 1 - i;
  return i;
}

// Summed-area tables over the reflect-padded image.
struct Integrals {
  int w = 0, h = 0;  // padded dims
  std::vector<double> s1, s2;

  explicit Integrals(const GridF& img) {
    w = img.width + 2 * kPad;
    h = img.height + 2 * kPad;
    s1.assign(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    s2.assign(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
      double row1 = 0.0, row2 = 0.0;
      int sy = reflect(y - kPad, img.height);
      for (int x = 0; x < w; ++x) {
        double v = img.at(sy, reflect(x - kPad, img.width));
        row1 += v;
        row2 += v * v;
        size_t i = static_cast<size_t>(y + 1) * (w + 1) + (x + 1);
        s1[i] = s1[i - (w + 1)] + row1;
        s2[i] = s2[i - (w + 1)] + row2;
      }
    }
  }

  // Box sums centered at unpadded pixel (cy, cx), window win x win.
  void box(int cy, int cx, int win, double& sum, double& sqsum) const {
    int half = win / 2;
    int y1 = cy + kPad - half, y2 = cy + kPad + half + 1;
    int x1 = cx + kPad - half, x2 = cx + kPad + half + 1;
    size_t a = static_cast<size_t>(y1) * (w + 1);
    size_t b = static_cast<size_t>(y2) * (w + 1);
    sum = s1[b + x2] - s1[a + x2] - s1[b + x1] + s1[a + x1];
    sqsum = s2[b + x2] - s2[a + x2] - s2[b + x1] + s2[a + x1];
  }

  double mean(int cy, int cx, int win) const {
    double s, q;
    box(cy, cx, win, s, q);
    return s / (static_cast<double>(win) * win);
  }
};

FeatureGrid make_grid(const GridF& img, const EncoderSpec& spec, int frame_index) {
  if (spec.stride < 1 || img.width % spec.stride != 0 || img.height % spec.stride != 0)
    throw ValidationError("encoder stride must divide the working resolution");
  if (spec.key_dim != kKeyDim || spec.value_dim != kValueDim)
    throw ValidationError("reference encoder is fixed at 15 key / 3 value channels");
  FeatureGrid fg;
  fg.width = img.width / spec.stride;
  fg.height = img.height / spec.stride;
  fg.key_dim = spec.key_dim;
  fg.value_dim = spec.value_dim;
  fg.stride = spec.stride;
  fg.frame_index = frame_index;
  fg.keys.assign(static_cast<size_t>(fg.sites()) * fg.key_dim, 0.0);
  fg.values.assign(static_cast<size_t>(fg.sites()) * fg.value_dim, 0.0);
  return fg;
}

void fill_keys(FeatureGrid& fg, const GridF& img) {
  Integrals integ(img);
  int stride = fg.stride;
  for (int sy = 0; sy < fg.height; ++sy) {
    int cy = sy * stride + stride / 2;
    for (int sx = 0; sx < fg.width; ++sx) {
      int cx = sx * stride + stride / 2;
      double* k = &fg.keys[(static_cast<size_t>(sy) * fg.width + sx) * fg.key_dim];
      int c = 0;
      for (int win : kWindows) {
        double sum, sqsum;
        integ.box(cy, cx, win, sum, sqsum);
        double n = static_cast<double>(win) * win;
        double mu = sum / n;
        double var = sqsum / n - mu * mu;
        double right = integ.mean(cy, cx + 1, win);
        double left = integ.mean(cy, cx - 1, win);
        double down = integ.mean(cy + 1, cx, win);
        double up = integ.mean(cy - 1, cx, win);
        k[c++] = mu;
        k[c++] = std::sqrt(std::max(var, 0.0));
        k[c++] = 0.5 * (right - left);
        k[c++] = 0.5 * (down - up);
        k[c++] = right + left + down + up - 4.0 * mu;
      }
    }
  }
}

}  // namespace

FeatureGrid encode_query(const imaging::NormalizedImage& image, const EncoderSpec& spec,
                         int frame_index) {
  FeatureGrid fg = make_grid(image.values, spec, frame_index);
  fill_keys(fg, image.values);
  return fg;
}

FeatureGrid encode_memory(const imaging::NormalizedImage& image, const GridF& mask_prob,
                          const EncoderSpec& spec, int frame_index) {
  if (!mask_prob.same_shape(image.values.width, image.values.height))
    throw ValidationError("encode_memory: mask probability grid dimension mismatch");
  FeatureGrid fg = make_grid(image.values, spec, frame_index);
  fill_keys(fg, image.values);

  Integrals integ(image.values);
  int stride = fg.stride;
  double cell = static_cast<double>(stride) * stride;
  for (int sy = 0; sy < fg.height; ++sy) {
    for (int sx = 0; sx < fg.width; ++sx) {
      double acc = 0.0;
      for (int y = sy * stride; y < (sy + 1) * stride; ++y)
        for (int x = sx * stride; x < (sx + 1) * stride; ++x) acc += mask_prob.at(y, x);
      double p = acc / cell;
      double* v = &fg.values[(static_cast<size_t>(sy) * fg.width + sx) * fg.value_dim];
      v[0] = p;
      v[1] = 1.0 - p;
      v[2] = integ.mean(sy * stride + stride / 2, sx * stride + stride / 2, 7);
    }
  }
  return fg;
}

}  // namespace cinetrack::encoder
