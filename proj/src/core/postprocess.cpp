#include "core/postprocess.hpp"

#include <vector>

namespace cinetrack::postprocess {

segmenter::ProbMap Smoother::update(const segmenter::ProbMap& p) {
  for (double v : p.values.data)
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("EMA input outside [0,1]");
  if (!ema_) {
    ema_ = p.values;
    return p;
  }
  if (!ema_->same_shape(p.values.width, p.values.height))
    throw ValidationError("EMA input dimensions changed mid-sequence");
  segmenter::ProbMap out;
  out.frame_index = p.frame_index;
  out.values = GridF(p.values.width, p.values.height);
  for (size_t i = 0; i < p.values.size(); ++i)
    out.values.data[i] = alpha_ * p.values.data[i] + (1.0 - alpha_) * ema_->data[i];
  *ema_ = out.values;
  return out;
}

Mask threshold(const segmenter::ProbMap& p, double tau) {
  if (!(tau > 0.0) || tau >= 1.0) throw ValidationError("threshold tau must be in (0, 1)");
  Mask m;
  m.index = p.frame_index;
  m.labels = GridU8(p.values.width, p.values.height);
  for (size_t i = 0; i < p.values.size(); ++i) m.labels.data[i] = p.values.data[i] >= tau ? 1 : 0;
  return m;
}

Mask largest_component(const Mask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8)
    throw ValidationError("connectivity must be 4 or 8");
  const GridU8& in = mask.labels;
  const int w = in.width, h = in.height;

  Mask out;
  out.index = mask.index;
  out.labels = GridU8(w, h, 0);

  std::vector<int32_t> label(in.size(), -1);
  std::vector<int32_t> stack;
  int best_label = -1;
  size_t best_size = 0;
  int32_t next = 0;

  static const int dx8[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static const int dy8[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static const int dx4[4] = {0, -1, 1, 0};
  static const int dy4[4] = {-1, 0, 0, 1};
  const int* dx = connectivity == 8 ? dx8 : dx4;
  const int* dy = connectivity == 8 ? dy8 : dy4;
  const int nn = connectivity;

  // Row-major scan: the first component reaching the maximum size wins,
  // which is exactly the smallest-(row,col)-seed tie-break.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int idx = y * w + x;
      if (!in.data[idx] || label[idx] >= 0) continue;
      size_t count = 0;
      label[idx] = next;
      stack.push_back(idx);
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        ++count;
        int cy = cur / w, cx = cur % w;
        for (int n = 0; n < nn; ++n) {
          int ny = cy + dy[n], nx = cx + dx[n];
          if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
          int ni = ny * w + nx;
          if (in.data[ni] && label[ni] < 0) {
            label[ni] = next;
            stack.push_back(ni);
          }
        }
      }
      if (count > best_size) {
        best_size = count;
        best_label = next;
      }
      ++next;
    }
  }

  if (best_label >= 0)
    for (size_t i = 0; i < in.size(); ++i)
      if (label[i] == best_label) out.labels.data[i] = 1;
  return out;
}

}  // namespace cinetrack::postprocess
