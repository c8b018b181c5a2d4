#include "core/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "core/seqio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cinetrack::runner {

namespace {

json config_json(const tracker::TrackerConfig& c) {
  return json{{"resolution_w", c.resolution_w},
              {"resolution_h", c.resolution_h},
              {"stride", c.stride},
              {"k", c.write_cadence_k},
              {"capacity", c.capacity},
              {"top_k", c.top_k},
              {"temperature", c.temperature},
              {"alpha", c.ema_alpha},
              {"tau", c.threshold_tau},
              {"connectivity", c.connectivity},
              {"pad_factor", c.pad_factor},
              {"budget_s", c.latency_budget_s}};
}

tracker::TrackerConfig config_from(const json& j, tracker::TrackerConfig c) {
  if (j.contains("resolution")) {
    c.resolution_w = j.at("resolution").get<int>();
    c.resolution_h = c.resolution_w;
  }
  if (j.contains("resolution_w")) c.resolution_w = j.at("resolution_w").get<int>();
  if (j.contains("resolution_h")) c.resolution_h = j.at("resolution_h").get<int>();
  if (j.contains("stride")) c.stride = j.at("stride").get<int>();
  if (j.contains("k")) c.write_cadence_k = j.at("k").get<int>();
  if (j.contains("capacity")) c.capacity = j.at("capacity").get<int>();
  if (j.contains("top_k")) c.top_k = j.at("top_k").get<int>();
  if (j.contains("temperature")) c.temperature = j.at("temperature").get<double>();
  if (j.contains("alpha")) c.ema_alpha = j.at("alpha").get<double>();
  if (j.contains("tau")) c.threshold_tau = j.at("tau").get<double>();
  if (j.contains("connectivity")) c.connectivity = j.at("connectivity").get<int>();
  if (j.contains("pad_factor")) c.pad_factor = j.at("pad_factor").get<double>();
  if (j.contains("budget_s")) c.latency_budget_s = j.at("budget_s").get<double>();
  return c;
}

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

}  // namespace

std::string config_to_json(const tracker::TrackerConfig& config) {
  return config_json(config).dump(2);
}

tracker::TrackerConfig config_from_json(const std::string& text,
                                        const tracker::TrackerConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("malformed config JSON: " + std::string(e.what()));
  }
  return config_from(j, base);
}

tracker::RunSummary track_directory(const TrackRequest& request) {
  std::string started = iso_now();
  auto [meta, frames] = seqio::read_sequence(request.input_dir);
  std::string mask_path = request.first_mask_path.empty()
                              ? (fs::path(request.input_dir) / seqio::mask_filename(0)).string()
                              : request.first_mask_path;
  Mask mask1 = seqio::read_mask(mask_path);
  if (!mask1.labels.same_shape(meta.width, meta.height))
    throw ValidationError("first mask dimensions do not match the sequence");
  mask1.index = 0;

  fs::create_directories(request.output_dir);
  auto [results, summary] = tracker::run_sequence(frames, mask1, request.config);

  json latency = json::array();
  for (size_t t = 0; t < results.size(); ++t) {
    seqio::write_mask(results[t].mask,
                      (fs::path(request.output_dir) / seqio::mask_filename(static_cast<int>(t)))
                          .string());
    if (request.write_overlays)
      seqio::render_overlay(
          frames[t], results[t].mask,
          (fs::path(request.output_dir) / ("overlay_" + std::to_string(t) + ".ppm")).string());
    latency.push_back(json{{"frame", t}, {"seconds", results[t].elapsed_s}});
  }

  {
    std::ofstream out(fs::path(request.output_dir) / "latency.json");
    out << latency.dump(2) << "\n";
  }
  {
    json manifest{{"tool_version", kToolVersion},
                  {"started", started},
                  {"finished", iso_now()},
                  {"input_dir", fs::absolute(request.input_dir).string()},
                  {"first_mask", fs::absolute(mask_path).string()},
                  {"output_dir", fs::absolute(request.output_dir).string()},
                  {"config", config_json(request.config)},
                  {"frames", results.size()},
                  {"mean_latency_s", summary.mean_latency_s},
                  {"fallback_count", summary.fallback_count}};
    std::ofstream out(fs::path(request.output_dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  return summary;
}

tracker::RunSummary replay_manifest(const std::string& manifest_path,
                                    const std::string& output_dir) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed manifest: " + std::string(e.what()));
  }
  TrackRequest req;
  req.input_dir = j.at("input_dir").get<std::string>();
  req.first_mask_path = j.at("first_mask").get<std::string>();
  req.output_dir = output_dir;
  req.config = config_from(j.at("config"), tracker::TrackerConfig{});
  return track_directory(req);
}

namespace {

std::vector<Mask> read_mask_dir(const std::string& dir, int expect_count) {
  std::vector<Mask> out;
  for (int t = 0;; ++t) {
    fs::path p = fs::path(dir) / seqio::mask_filename(t);
    if (!fs::exists(p)) break;
    Mask m = seqio::read_mask(p.string());
    m.index = t;
    out.push_back(std::move(m));
    if (expect_count > 0 && t + 1 >= expect_count) break;
  }
  return out;
}

}  // namespace

metrics::MetricReport evaluate_directories(const EvalRequest& request) {
  std::vector<Mask> preds = read_mask_dir(request.pred_dir, -1);
  std::vector<Mask> refs = read_mask_dir(request.ref_dir, -1);
  if (preds.size() != refs.size())
    throw ValidationError("prediction count " + std::to_string(preds.size()) +
                          " does not match reference count " + std::to_string(refs.size()));
  if (preds.empty()) throw ValidationError("no masks found to evaluate");

  double spacing = 1.0;
  bool spacing_known = false;
  if (fs::exists(fs::path(request.ref_dir) / "meta.json")) {
    SequenceMeta meta = seqio::read_meta(request.ref_dir);
    spacing = meta.pixel_spacing_mm;
    spacing_known = meta.spacing_known;
  }

  std::vector<double> latencies;
  if (!request.latency_json.empty()) {
    std::ifstream in(request.latency_json);
    if (!in) throw IoError("cannot open latency file " + request.latency_json);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw IoError("malformed latency JSON: " + std::string(e.what()));
    }
    for (const auto& row : j) latencies.push_back(row.at("seconds").get<double>());
  }

  metrics::MetricReport rep = metrics::evaluate_run(preds, refs, latencies, spacing,
                                                    spacing_known, request.budget_s);
  if (!request.csv_path.empty()) metrics::write_csv(rep, request.csv_path);
  if (!request.json_path.empty()) metrics::write_summary_json(rep, request.json_path);
  return rep;
}

}  // namespace cinetrack::runner
