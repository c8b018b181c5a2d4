#ifndef CINETRACK_TRACKER_HPP
#define CINETRACK_TRACKER_HPP

#include <cmath>

#include "core/imaging.hpp"
#include "core/memory.hpp"
#include "core/postprocess.hpp"

namespace cinetrack::tracker {

struct TrackerConfig {
  int resolution_w = 384;
  int resolution_h = 384;
  int stride = 4;
  int write_cadence_k = 5;
  int capacity = 64;
  int top_k = 8;
  double temperature = std::sqrt(static_cast<double>(encoder::kKeyDim));
  double ema_alpha = 0.5;
  double threshold_tau = 0.5;
  int connectivity = 8;
  double pad_factor = 2.0;
  double latency_budget_s = 1.0;

  void validate() const;
};

struct FrameResult {
  Mask mask;              // original frame coordinates
  double elapsed_s = 0.0;
  size_t memory_entries = 0;
  bool fallback = false;  // empty prediction -> previous mask held
};

struct RunSummary {
  int frames = 0;
  double mean_latency_s = 0.0;
  double median_latency_s = 0.0;
  double p95_latency_s = 0.0;
  double max_latency_s = 0.0;
  int budget_violations = 0;
  bool mean_within_budget = true;
  int fallback_count = 0;
  size_t peak_memory_entries = 0;
};

// Streaming mask propagation over one sequence. Construction consumes the
// annotated first frame; step() handles every later frame in strictly
// increasing index order.
class Tracker {
 public:
  Tracker(const Frame& frame1, const Mask& mask1, const TrackerConfig& config);

  FrameResult step(const Frame& frame);

  const TrackerConfig& config() const { return config_; }
  const imaging::RoiTransform& roi() const { return roi_; }
  const memory::MemoryStore& store() const { return store_; }
  double init_elapsed_s() const { return init_elapsed_s_; }
  const std::vector<std::pair<int, double>>& latency_log() const { return latency_log_; }
  const Mask& last_mask() const { return last_mask_; }

 private:
  TrackerConfig config_;
  encoder::EncoderSpec spec_;
  imaging::RoiTransform roi_;
  memory::MemoryStore store_;
  postprocess::Smoother smoother_;
  Mask last_mask_;  // last non-empty prediction, original coordinates
  int src_w_ = 0, src_h_ = 0;
  int last_index_ = -1;
  double init_elapsed_s_ = 0.0;
  std::vector<std::pair<int, double>> latency_log_;
};

// Runs a whole sequence; the first frame's result is mask1 itself with the
// init time as its latency.
std::pair<std::vector<FrameResult>, RunSummary> run_sequence(const std::vector<Frame>& frames,
                                                             const Mask& mask1,
                                                             const TrackerConfig& config);

RunSummary summarize(const std::vector<FrameResult>& results, double budget_s);

}  // namespace cinetrack::tracker

#endif
