// Command-line front end for the cinetrack shared library: track a sequence,
// evaluate predictions, generate synthetic phantoms, and benchmark latency.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "cinetrack.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitBudget = 3;  // run succeeded but mean latency exceeded the budget

int exit_code_for(ct_status status) {
  switch (status) {
    case CT_OK:
      return 0;
    case CT_ERR_INVALID_ARGUMENT:
    case CT_ERR_IO:
      return kExitBadInput;
    default:
      return kExitRuntime;
  }
}

int report_error(ct_status status) {
  std::fprintf(stderr, "error: %s\n", ct_last_error());
  return exit_code_for(status);
}

void apply_config_file(const std::string& path, ct_config& cfg) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
  if (j.contains("resolution_w")) cfg.resolution = j["resolution_w"].get<int>();
  if (j.contains("stride")) cfg.stride = j["stride"].get<int>();
  if (j.contains("k")) cfg.write_cadence_k = j["k"].get<int>();
  if (j.contains("capacity")) cfg.capacity = j["capacity"].get<int>();
  if (j.contains("top_k")) cfg.top_k = j["top_k"].get<int>();
  if (j.contains("temperature")) cfg.temperature = j["temperature"].get<double>();
  if (j.contains("alpha")) cfg.ema_alpha = j["alpha"].get<double>();
  if (j.contains("tau")) cfg.threshold_tau = j["tau"].get<double>();
  if (j.contains("connectivity")) cfg.connectivity = j["connectivity"].get<int>();
  if (j.contains("pad_factor")) cfg.pad_factor = j["pad_factor"].get<double>();
  if (j.contains("budget_s")) cfg.budget_s = j["budget_s"].get<double>();
}

void print_run_summary(const ct_run_summary& s, double budget_s) {
  std::printf("frames             %d\n", s.frames);
  std::printf("latency mean       %.4f s\n", s.mean_latency_s);
  std::printf("latency median     %.4f s\n", s.median_latency_s);
  std::printf("latency p95        %.4f s\n", s.p95_latency_s);
  std::printf("latency max        %.4f s\n", s.max_latency_s);
  std::printf("budget             %.2f s (%d frame violations)\n", budget_s,
              s.budget_violations);
  std::printf("fallbacks          %d\n", s.fallback_count);
  std::printf("memory high-water  %d entries\n", s.peak_memory_entries);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cinetrack: memory-based mask propagation for cine sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ct_version());

  ct_config cfg;
  ct_config_defaults(&cfg);

  std::string config_file;
  auto add_config_flags = [&cfg, &config_file](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    cmd->add_option("--resolution", cfg.resolution, "working resolution (square)");
    cmd->add_option("--stride", cfg.stride, "feature stride");
    cmd->add_option("--k", cfg.write_cadence_k, "memory write cadence (frames)");
    cmd->add_option("--capacity", cfg.capacity, "memory capacity (entries)");
    cmd->add_option("--top-k", cfg.top_k, "readout top-k");
    cmd->add_option("--temperature", cfg.temperature, "softmax temperature");
    cmd->add_option("--alpha", cfg.ema_alpha, "EMA smoothing coefficient");
    cmd->add_option("--tau", cfg.threshold_tau, "binarization threshold");
    cmd->add_option("--connectivity", cfg.connectivity, "component connectivity (4 or 8)");
    cmd->add_option("--pad-factor", cfg.pad_factor, "ROI padding factor");
    cmd->add_option("--budget-s", cfg.budget_s, "per-frame latency budget (seconds)");
  };

  auto resolve_config = [&cfg, &config_file](CLI::App* cmd) {
    // Config file first, then re-apply any explicit flags on top.
    auto* opt = cmd->get_option("--config");
    if (opt->count()) {
      ct_config from_flags = cfg;
      ct_config_defaults(&cfg);
      apply_config_file(config_file, cfg);
      auto keep = [&](const char* name, auto ct_config::* field) {
        if (cmd->get_option(name)->count()) cfg.*field = from_flags.*field;
      };
      keep("--resolution", &ct_config::resolution);
      keep("--stride", &ct_config::stride);
      keep("--k", &ct_config::write_cadence_k);
      keep("--capacity", &ct_config::capacity);
      keep("--top-k", &ct_config::top_k);
      keep("--temperature", &ct_config::temperature);
      keep("--alpha", &ct_config::ema_alpha);
      keep("--tau", &ct_config::threshold_tau);
      keep("--connectivity", &ct_config::connectivity);
      keep("--pad-factor", &ct_config::pad_factor);
      keep("--budget-s", &ct_config::budget_s);
    }
  };

  // track ------------------------------------------------------------
  auto* track = app.add_subcommand("track", "propagate a first-frame mask through a sequence");
  std::string in_dir, first_mask, out_dir, replay_manifest;
  bool overlays = false;
  track->add_option("--input", in_dir, "sequence directory (meta.json + frame_*.pgm)");
  track->add_option("--first-mask", first_mask, "first-frame mask PGM");
  track->add_option("--output", out_dir, "output directory")->required();
  track->add_option("--replay", replay_manifest, "re-run a recorded manifest.json")
      ->check(CLI::ExistingFile);
  track->add_flag("--overlays", overlays, "also write RGB overlay images");
  add_config_flags(track);

  // eval ---------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "score predicted masks against references");
  std::string pred_dir, ref_dir, latency_path, report_csv, summary_json;
  double eval_budget = 1.0;
  eval->add_option("--pred", pred_dir, "predicted mask directory")->required();
  eval->add_option("--ref", ref_dir, "reference mask directory")->required();
  eval->add_option("--latency", latency_path, "latency.json from a track run");
  eval->add_option("--report", report_csv, "per-frame CSV output")->required();
  eval->add_option("--summary", summary_json, "aggregate JSON output");
  eval->add_option("--budget-s", eval_budget, "latency budget for violation counting");

  // synth --------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic cine phantom");
  ct_phantom ph;
  ct_phantom_defaults(&ph);
  std::string synth_out;
  synth->add_option("--out", synth_out, "output sequence directory")->required();
  synth->add_option("--size", ph.size, "square image side");
  synth->add_option("--frames", ph.frames, "frame count");
  synth->add_option("--amplitude", ph.amplitude_px, "vertical motion amplitude (px)");
  synth->add_option("--period", ph.period_frames, "motion period (frames)");
  synth->add_option("--noise", ph.noise_sigma, "Gaussian noise sigma (intensity units)");
  synth->add_option("--seed", ph.seed, "RNG seed");
  synth->add_option("--deformation", ph.deformation, "semi-axis modulation fraction");
  synth->add_option("--drift", ph.drift_per_frame, "intensity gain drift per frame");
  synth->add_option("--semi-x", ph.semi_x, "ellipse x semi-axis (px)");
  synth->add_option("--semi-y", ph.semi_y, "ellipse y semi-axis (px)");

  // bench --------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "latency benchmark on a generated phantom");
  int bench_size = 256, bench_frames = 100;
  uint64_t bench_seed = 7;
  bench->add_option("--size", bench_size, "phantom side; also the working resolution "
                                          "unless --resolution is given");
  bench->add_option("--frames", bench_frames, "frame count");
  bench->add_option("--seed", bench_seed, "phantom RNG seed");
  add_config_flags(bench);

  CLI11_PARSE(app, argc, argv);

  if (track->parsed()) {
    resolve_config(track);
    ct_run_summary summary{};
    ct_status st;
    if (!replay_manifest.empty()) {
      st = ct_replay_manifest(replay_manifest.c_str(), out_dir.c_str(), &summary);
    } else {
      if (in_dir.empty()) {
        std::fprintf(stderr, "error: track needs --input (or --replay)\n");
        return kExitBadInput;
      }
      st = ct_track_sequence(in_dir.c_str(), first_mask.empty() ? nullptr : first_mask.c_str(),
                             out_dir.c_str(), &cfg, overlays ? 1 : 0, &summary);
    }
    if (st != CT_OK) return report_error(st);
    print_run_summary(summary, cfg.budget_s);
    return summary.mean_within_budget ? 0 : kExitBudget;
  }

  if (eval->parsed()) {
    ct_eval_summary s{};
    ct_status st = ct_evaluate(pred_dir.c_str(), ref_dir.c_str(),
                               latency_path.empty() ? nullptr : latency_path.c_str(),
                               report_csv.c_str(),
                               summary_json.empty() ? nullptr : summary_json.c_str(),
                               eval_budget, &s);
    if (st != CT_OK) return report_error(st);
    const char* unit = s.unit_is_mm ? "mm" : "px";
    std::printf("frames         %d (%d with surface metrics)\n", s.frames,
                s.valid_surface_frames);
    std::printf("DSC   mean %.4f  median %.4f\n", s.mean_dsc, s.median_dsc);
    std::printf("HD95  mean %.4f  median %.4f %s\n", s.mean_hd95, s.median_hd95, unit);
    std::printf("MSD   mean %.4f  median %.4f %s\n", s.mean_msd, s.median_msd, unit);
    if (s.latency_frames > 0)
      std::printf("runtime mean %.4f s over %d frames, %d budget violations\n",
                  s.mean_elapsed_s, s.latency_frames, s.budget_violations);
    return 0;
  }

  if (synth->parsed()) {
    ct_status st = ct_generate_phantom(&ph, synth_out.c_str());
    if (st != CT_OK) return report_error(st);
    std::printf("wrote %d frames to %s (seed %" PRIu64 ")\n", ph.frames, synth_out.c_str(),
                static_cast<uint64_t>(ph.seed));
    return 0;
  }

  if (bench->parsed()) {
    resolve_config(bench);
    if (!bench->get_option("--resolution")->count()) cfg.resolution = bench_size;

    ct_phantom bp;
    ct_phantom_defaults(&bp);
    bp.size = bench_size;
    bp.frames = bench_frames;
    bp.semi_x = bench_size * 0.14;
    bp.semi_y = bench_size * 0.11;
    bp.amplitude_px = bench_size * 0.06;
    bp.noise_sigma = 16.0;
    bp.seed = bench_seed;

    std::random_device rd;
    fs::path tmp = fs::temp_directory_path() /
                   ("cinetrack_bench_" + std::to_string(rd()) + "_" + std::to_string(::getpid()));
    fs::path seq = tmp / "seq", out = tmp / "out";

    ct_status st = ct_generate_phantom(&bp, seq.string().c_str());
    if (st != CT_OK) return report_error(st);
    ct_run_summary summary{};
    st = ct_track_sequence(seq.string().c_str(), nullptr, out.string().c_str(), &cfg, 0,
                           &summary);
    std::error_code ec;
    fs::remove_all(tmp, ec);
    if (st != CT_OK) return report_error(st);

    std::printf("bench: %dx%d phantom, %d frames, working resolution %d\n", bench_size,
                bench_size, bench_frames, cfg.resolution);
    print_run_summary(summary, cfg.budget_s);
    return summary.mean_within_budget ? 0 : kExitBudget;
  }

  return 0;
}
