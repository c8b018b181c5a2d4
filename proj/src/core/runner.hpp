#ifndef CINETRACK_RUNNER_HPP
#define CINETRACK_RUNNER_HPP

#include <string>

#include "core/metrics.hpp"
#include "core/tracker.hpp"

namespace cinetrack::runner {

inline constexpr const char* kToolVersion = "0.1.0";

struct TrackRequest {
  std::string input_dir;
  std::string first_mask_path;  // empty -> <input_dir>/mask_00000.pgm
  std::string output_dir;
  tracker::TrackerConfig config;
  bool write_overlays = false;
};

// Tracks a sequence directory end to end: writes mask_%05d.pgm for every
// frame, manifest.json and latency.json into the output directory.
tracker::RunSummary track_directory(const TrackRequest& request);

// Re-runs the configuration recorded in a manifest.
tracker::RunSummary replay_manifest(const std::string& manifest_path,
                                    const std::string& output_dir);

struct EvalRequest {
  std::string pred_dir;
  std::string ref_dir;
  std::string latency_json;  // optional; empty leaves runtime columns blank
  std::string csv_path;
  std::string json_path;  // optional
  double budget_s = 1.0;
};

metrics::MetricReport evaluate_directories(const EvalRequest& request);

// TrackerConfig <-> JSON, used by the manifest and by --config files.
std::string config_to_json(const tracker::TrackerConfig& config);
tracker::TrackerConfig config_from_json(const std::string& text,
                                        const tracker::TrackerConfig& base);

}  // namespace cinetrack::runner

#endif
