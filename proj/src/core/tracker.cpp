#include "core/tracker.hpp"

#include <algorithm>
#include <chrono>

#include "core/metrics.hpp"

namespace cinetrack::tracker {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GridF mask_to_prob(const GridU8& mask) {
  GridF p(mask.width, mask.height);
  for (size_t i = 0; i < mask.size(); ++i) p.data[i] = mask.data[i] ? 1.0 : 0.0;
  return p;
}

}  // namespace

void TrackerConfig::validate() const {
  if (resolution_w < 16 || resolution_h < 16)
    throw ValidationError("working resolution must be >= 16");
  if (stride < 1 || resolution_w % stride != 0 || resolution_h % stride != 0)
    throw ValidationError("stride must divide the working resolution");
  if (write_cadence_k < 1) throw ValidationError("write cadence k must be >= 1");
  if (capacity < 1) throw ValidationError("capacity must be >= 1");
  if (top_k < 1) throw ValidationError("top_k must be >= 1");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
  if (!(ema_alpha > 0.0) || ema_alpha > 1.0) throw ValidationError("alpha must be in (0, 1]");
  if (!(threshold_tau > 0.0) || threshold_tau >= 1.0)
    throw ValidationError("tau must be in (0, 1)");
  if (connectivity != 4 && connectivity != 8) throw ValidationError("connectivity must be 4 or 8");
  if (pad_factor < 1.0) throw ValidationError("pad_factor must be >= 1");
  if (!(latency_budget_s > 0.0)) throw ValidationError("latency budget must be > 0");
}

Tracker::Tracker(const Frame& frame1, const Mask& mask1, const TrackerConfig& config)
    : config_(config),
      spec_{config.stride, encoder::kKeyDim, encoder::kValueDim},
      store_(config.capacity, config.write_cadence_k),
      smoother_(config.ema_alpha) {
  auto t0 = Clock::now();
  config_.validate();
  if (!mask1.labels.same_shape(frame1.pixels.width, frame1.pixels.height))
    throw ValidationError("first mask dimensions do not match first frame");
  if (mask1.empty()) throw ValidationError("empty initial mask");

  src_w_ = frame1.pixels.width;
  src_h_ = frame1.pixels.height;
  roi_ = imaging::roi_from_mask(mask1, config_.pad_factor, config_.resolution_w,
                                config_.resolution_h);

  imaging::NormalizedImage norm = imaging::normalize_zscore(frame1);
  GridF work_img = imaging::crop_resize(norm.values, roi_);
  GridU8 work_mask = imaging::crop_resize(mask1.labels, roi_);
  encoder::FeatureGrid fg =
      encoder::encode_memory({std::move(work_img)}, mask_to_prob(work_mask), spec_, frame1.index);
  store_.write(fg, frame1.index);

  last_mask_ = mask1;
  last_index_ = frame1.index;
  init_elapsed_s_ = seconds_since(t0);
  latency_log_.emplace_back(frame1.index, init_elapsed_s_);
}

FrameResult Tracker::step(const Frame& frame) {
  auto t0 = Clock::now();
  if (frame.index <= last_index_)
    throw ValidationError("frames must arrive in strictly increasing index order");
  if (!frame.pixels.same_shape(src_w_, src_h_))
    throw ValidationError("frame dimensions changed mid-sequence");

  imaging::NormalizedImage norm = imaging::normalize_zscore(frame);
  GridF work_img = imaging::crop_resize(norm.values, roi_);
  imaging::NormalizedImage work{std::move(work_img)};

  encoder::FeatureGrid query = encoder::encode_query(work, spec_, frame.index);
  memory::Readout readout = store_.read(query, config_.top_k, config_.temperature);
  segmenter::ProbMap prob = segmenter::decode(readout, spec_, frame.index);
  segmenter::ProbMap smoothed = smoother_.update(prob);
  Mask work_mask = postprocess::threshold(smoothed, config_.threshold_tau);

  FrameResult result;
  if (work_mask.empty()) {
    // Track lost: hold the previous mask and leave the memory untouched.
    result.mask = last_mask_;
    result.mask.index = frame.index;
    result.fallback = true;
  } else {
    Mask kept = postprocess::largest_component(work_mask, config_.connectivity);
    result.mask = imaging::uncrop_mask(kept.labels, roi_, src_w_, src_h_, frame.index);
    if (!result.mask.empty()) last_mask_ = result.mask;
    if (frame.index % config_.write_cadence_k == 0) {
      encoder::FeatureGrid mem = encoder::encode_memory(work, smoothed.values, spec_, frame.index);
      store_.write(mem, frame.index);
    }
  }

  last_index_ = frame.index;
  result.memory_entries = store_.size();
  result.elapsed_s = seconds_since(t0);
  latency_log_.emplace_back(frame.index, result.elapsed_s);
  return result;
}

RunSummary summarize(const std::vector<FrameResult>& results, double budget_s) {
  RunSummary s;
  s.frames = static_cast<int>(results.size());
  std::vector<double> lats;
  for (const FrameResult& r : results) {
    lats.push_back(r.elapsed_s);
    s.max_latency_s = std::max(s.max_latency_s, r.elapsed_s);
    if (r.elapsed_s > budget_s) ++s.budget_violations;
    if (r.fallback) ++s.fallback_count;
    s.peak_memory_entries = std::max(s.peak_memory_entries, r.memory_entries);
  }
  if (!lats.empty()) {
    double sum = 0.0;
    for (double v : lats) sum += v;
    s.mean_latency_s = sum / lats.size();
    std::vector<double> sorted = lats;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    s.median_latency_s = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    s.p95_latency_s = metrics::percentile(sorted, 0.95);
  }
  s.mean_within_budget = s.mean_latency_s < budget_s;
  return s;
}

std::pair<std::vector<FrameResult>, RunSummary> run_sequence(const std::vector<Frame>& frames,
                                                             const Mask& mask1,
                                                             const TrackerConfig& config) {
  if (frames.empty()) throw ValidationError("run_sequence: no frames");
  Tracker tracker(frames[0], mask1, config);

  std::vector<FrameResult> results;
  FrameResult first;
  first.mask = mask1;
  first.mask.index = frames[0].index;
  first.elapsed_s = tracker.init_elapsed_s();
  first.memory_entries = tracker.store().size();
  results.push_back(std::move(first));

  for (size_t t = 1; t < frames.size(); ++t) results.push_back(tracker.step(frames[t]));
  RunSummary summary = summarize(results, config.latency_budget_s);
  return {std::move(results), summary};
}

}  // namespace cinetrack::tracker
