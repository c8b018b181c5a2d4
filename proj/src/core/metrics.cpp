#include "core/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/edt.hpp"

namespace cinetrack::metrics {

double dsc(const Mask& a, const Mask& b) {
  require_same_shape(a, b, "dsc");
  size_t na = 0, nb = 0, inter = 0;
  for (size_t i = 0; i < a.labels.size(); ++i) {
    bool fa = a.labels.data[i] != 0, fb = b.labels.data[i] != 0;
    na += fa;
    nb += fb;
    inter += fa && fb;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

namespace {

GridU8 boundary_pixels(const Mask& m) {
  const GridU8& in = m.labels;
  GridU8 out(in.width, in.height, 0);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) {
      if (!in.at(y, x)) continue;
      bool bg = y == 0 || y == in.height - 1 || x == 0 || x == in.width - 1 ||
                !in.at(y - 1, x) || !in.at(y + 1, x) || !in.at(y, x - 1) || !in.at(y, x + 1);
      if (bg) out.at(y, x) = 1;
    }
  return out;
}

std::vector<double> directed(const GridU8& from, const GridF& dist_to_other, double spacing) {
  std::vector<double> out;
  for (int y = 0; y < from.height; ++y)
    for (int x = 0; x < from.width; ++x)
      if (from.at(y, x)) out.push_back(std::sqrt(dist_to_other.at(y, x)) * spacing);
  return out;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> surface_distances(const Mask& a,
                                                                      const Mask& b,
                                                                      double spacing) {
  require_same_shape(a, b, "surface_distances");
  if (a.empty() || b.empty())
    throw ValidationError("surface_distances undefined for empty masks");
  GridU8 ba = boundary_pixels(a);
  GridU8 bb = boundary_pixels(b);
  GridF da = edt::squared_distance_transform(ba);
  GridF db = edt::squared_distance_transform(bb);
  return {directed(ba, db, spacing), directed(bb, da, spacing)};
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("percentile of empty list");
  std::sort(values.begin(), values.end());
  double rank = p * (values.size() - 1);
  size_t lo = static_cast<size_t>(rank);
  size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = rank - lo;
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double hd95(const Mask& a, const Mask& b, double spacing) {
  auto [ab, ba] = surface_distances(a, b, spacing);
  ab.insert(ab.end(), ba.begin(), ba.end());
  return percentile(std::move(ab), 0.95);
}

double msd(const Mask& a, const Mask& b, double spacing) {
  auto [ab, ba] = surface_distances(a, b, spacing);
  double sum = 0.0;
  for (double d : ab) sum += d;
  for (double d : ba) sum += d;
  return sum / (ab.size() + ba.size());
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MetricReport evaluate_run(const std::vector<Mask>& predictions,
                          const std::vector<Mask>& references,
                          const std::vector<double>& latencies, double spacing,
                          bool spacing_known, double budget_s) {
  if (predictions.size() != references.size())
    throw ValidationError("evaluate_run: prediction count " + std::to_string(predictions.size()) +
                          " != reference count " + std::to_string(references.size()));
  MetricReport rep;
  rep.unit_is_mm = spacing_known;
  rep.budget_s = budget_s;

  std::vector<double> dscs, hd95s, msds, lats;
  for (size_t i = 0; i < predictions.size(); ++i) {
    FrameMetrics row;
    row.frame = static_cast<int>(i);
    row.dsc = dsc(predictions[i], references[i]);
    dscs.push_back(row.dsc);
    if (!predictions[i].empty() && !references[i].empty()) {
      auto [ab, ba] = surface_distances(predictions[i], references[i], spacing);
      ab.insert(ab.end(), ba.begin(), ba.end());
      row.hd95 = percentile(ab, 0.95);
      row.msd = mean_of(ab);
      row.valid_surface = true;
      hd95s.push_back(row.hd95);
      msds.push_back(row.msd);
    }
    if (i < latencies.size()) {
      row.elapsed_s = latencies[i];
      row.has_elapsed = true;
      lats.push_back(latencies[i]);
      if (latencies[i] > budget_s) ++rep.budget_violations;
    }
    rep.rows.push_back(row);
  }

  rep.mean_dsc = mean_of(dscs);
  rep.median_dsc = median_of(dscs);
  rep.mean_hd95 = mean_of(hd95s);
  rep.median_hd95 = median_of(hd95s);
  rep.mean_msd = mean_of(msds);
  rep.median_msd = median_of(msds);
  rep.valid_surface_count = static_cast<int>(hd95s.size());
  rep.mean_elapsed_s = mean_of(lats);
  rep.latency_count = static_cast<int>(lats.size());
  return rep;
}

void write_csv(const MetricReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "frame,dsc,hd95,msd,elapsed_s,valid_surface\n";
  char buf[160];
  for (const FrameMetrics& r : report.rows) {
    std::string hd = r.valid_surface ? (std::snprintf(buf, sizeof(buf), "%.9g", r.hd95), buf) : "";
    std::string ms = r.valid_surface ? (std::snprintf(buf, sizeof(buf), "%.9g", r.msd), buf) : "";
    std::string el = r.has_elapsed ? (std::snprintf(buf, sizeof(buf), "%.6f", r.elapsed_s), buf) : "";
    std::snprintf(buf, sizeof(buf), "%.9g", r.dsc);
    out << r.frame << "," << buf << "," << hd << "," << ms << "," << el << ","
        << (r.valid_surface ? 1 : 0) << "\n";
  }
}

void write_summary_json(const MetricReport& report, const std::string& path) {
  nlohmann::json j{
      {"frames", report.rows.size()},
      {"unit", report.unit_is_mm ? "mm" : "px"},
      {"mean_dsc", report.mean_dsc},
      {"median_dsc", report.median_dsc},
      {"mean_hd95", report.mean_hd95},
      {"median_hd95", report.median_hd95},
      {"mean_msd", report.mean_msd},
      {"median_msd", report.median_msd},
      {"valid_surface_frames", report.valid_surface_count},
      {"latency_frames", report.latency_count},
      {"mean_elapsed_s", report.mean_elapsed_s},
      {"budget_s", report.budget_s},
      {"budget_violations", report.budget_violations},
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace cinetrack::metrics
