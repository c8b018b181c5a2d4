#ifndef CINETRACK_METRICS_HPP
#define CINETRACK_METRICS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace cinetrack::metrics {

// 2|A n B| / (|A| + |B|); both-empty pairs score 1 by convention.
double dsc(const Mask& a, const Mask& b);

// Boundary pixel: foreground with at least one background 4-neighbor, the
// image border counting as background. Returns the two directed lists of
// Euclidean boundary-to-boundary distances, scaled by spacing. Requires
// both masks non-empty.
std::pair<std::vector<double>, std::vector<double>> surface_distances(const Mask& a,
                                                                      const Mask& b,
                                                                      double spacing);

// Linear-interpolation percentile at rank p*(n-1) over the sorted values.
double percentile(std::vector<double> values, double p);

// 95th percentile over the union of both directed distance lists.
double hd95(const Mask& a, const Mask& b, double spacing);

// Mean of the union of both directed distance lists.
double msd(const Mask& a, const Mask& b, double spacing);

struct FrameMetrics {
  int frame = 0;
  double dsc = 0.0;
  double hd95 = 0.0;   // meaningful only when valid_surface
  double msd = 0.0;
  double elapsed_s = 0.0;
  bool has_elapsed = false;
  bool valid_surface = false;  // false when either mask is empty
};

struct MetricReport {
  std::vector<FrameMetrics> rows;
  bool unit_is_mm = false;  // false -> distances are in pixels
  double mean_dsc = 0.0, median_dsc = 0.0;
  double mean_hd95 = 0.0, median_hd95 = 0.0;  // over valid_surface rows only
  double mean_msd = 0.0, median_msd = 0.0;
  int valid_surface_count = 0;
  double mean_elapsed_s = 0.0;
  int latency_count = 0;
  int budget_violations = 0;
  double budget_s = 0.0;
};

// Aligned per-frame evaluation. latencies may be empty or shorter than the
// mask lists; missing entries leave the runtime columns blank.
MetricReport evaluate_run(const std::vector<Mask>& predictions,
                          const std::vector<Mask>& references,
                          const std::vector<double>& latencies, double spacing,
                          bool spacing_known, double budget_s);

void write_csv(const MetricReport& report, const std::string& path);
void write_summary_json(const MetricReport& report, const std::string& path);

}  // namespace cinetrack::metrics

#endif
