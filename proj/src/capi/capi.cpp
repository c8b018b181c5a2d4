#include "cinetrack.h"

#include <cstring>
#include <string>

#include "core/runner.hpp"
#include "core/synthcine.hpp"

using namespace cinetrack;

namespace {

thread_local std::string g_last_error = "";

ct_status fail(ct_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
ct_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    return fail(CT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const IoError& e) {
    return fail(CT_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(CT_ERR_RUNTIME, e.what());
  }
}

tracker::TrackerConfig to_core(const ct_config& c) {
  tracker::TrackerConfig out;
  out.resolution_w = c.resolution;
  out.resolution_h = c.resolution;
  out.stride = c.stride;
  out.write_cadence_k = c.write_cadence_k;
  out.capacity = c.capacity;
  out.top_k = c.top_k;
  out.temperature = c.temperature;
  out.ema_alpha = c.ema_alpha;
  out.threshold_tau = c.threshold_tau;
  out.connectivity = c.connectivity;
  out.pad_factor = c.pad_factor;
  out.latency_budget_s = c.budget_s;
  return out;
}

void fill_summary(const tracker::RunSummary& s, ct_run_summary* out) {
  if (!out) return;
  out->frames = s.frames;
  out->mean_latency_s = s.mean_latency_s;
  out->median_latency_s = s.median_latency_s;
  out->p95_latency_s = s.p95_latency_s;
  out->max_latency_s = s.max_latency_s;
  out->budget_violations = s.budget_violations;
  out->mean_within_budget = s.mean_within_budget ? 1 : 0;
  out->fallback_count = s.fallback_count;
  out->peak_memory_entries = static_cast<int>(s.peak_memory_entries);
}

}  // namespace

extern "C" {

struct ct_tracker {
  tracker::Tracker impl;
  int width, height;
};

const char* ct_version(void) { return runner::kToolVersion; }

const char* ct_last_error(void) { return g_last_error.c_str(); }

void ct_config_defaults(ct_config* config) {
  if (!config) return;
  tracker::TrackerConfig d;
  config->resolution = d.resolution_w;
  config->stride = d.stride;
  config->write_cadence_k = d.write_cadence_k;
  config->capacity = d.capacity;
  config->top_k = d.top_k;
  config->temperature = d.temperature;
  config->ema_alpha = d.ema_alpha;
  config->threshold_tau = d.threshold_tau;
  config->connectivity = d.connectivity;
  config->pad_factor = d.pad_factor;
  config->budget_s = d.latency_budget_s;
}

ct_status ct_tracker_create(const ct_config* config, int width, int height, int bit_depth,
                            const uint16_t* frame0, const uint8_t* mask0,
                            ct_tracker** out_tracker) {
  if (!config || !frame0 || !mask0 || !out_tracker)
    return fail(CT_ERR_INVALID_ARGUMENT, "ct_tracker_create: NULL argument");
  *out_tracker = nullptr;
  return guarded([&] {
    auto meta = std::make_shared<SequenceMeta>();
    meta->width = width;
    meta->height = height;
    meta->frame_count = 1;
    meta->bit_depth = bit_depth;
    meta->validate();

    Frame f{0, GridU16(width, height), meta};
    std::memcpy(f.pixels.data.data(), frame0, f.pixels.size() * sizeof(uint16_t));
    Mask m{0, GridU8(width, height)};
    for (size_t i = 0; i < m.labels.size(); ++i) m.labels.data[i] = mask0[i] ? 1 : 0;

    *out_tracker = new ct_tracker{tracker::Tracker(f, m, to_core(*config)), width, height};
    return CT_OK;
  });
}

ct_status ct_tracker_step(ct_tracker* tracker, int frame_index, const uint16_t* pixels,
                          uint8_t* mask_out, ct_frame_info* info) {
  if (!tracker || !pixels || !mask_out)
    return fail(CT_ERR_INVALID_ARGUMENT, "ct_tracker_step: NULL argument");
  return guarded([&] {
    Frame f{frame_index, GridU16(tracker->width, tracker->height), nullptr};
    std::memcpy(f.pixels.data.data(), pixels, f.pixels.size() * sizeof(uint16_t));
    cinetrack::tracker::FrameResult r = tracker->impl.step(f);
    std::memcpy(mask_out, r.mask.labels.data.data(), r.mask.labels.size());
    if (info) {
      info->elapsed_s = r.elapsed_s;
      info->memory_entries = static_cast<int>(r.memory_entries);
      info->fallback = r.fallback ? 1 : 0;
    }
    return CT_OK;
  });
}

int ct_tracker_memory_entries(const ct_tracker* tracker) {
  return tracker ? static_cast<int>(tracker->impl.store().size()) : -1;
}

void ct_tracker_destroy(ct_tracker* tracker) { delete tracker; }

ct_status ct_track_sequence(const char* input_dir, const char* first_mask,
                            const char* output_dir, const ct_config* config,
                            int write_overlays, ct_run_summary* out_summary) {
  if (!input_dir || !output_dir || !config)
    return fail(CT_ERR_INVALID_ARGUMENT, "ct_track_sequence: NULL argument");
  return guarded([&] {
    runner::TrackRequest req;
    req.input_dir = input_dir;
    req.first_mask_path = first_mask ? first_mask : "";
    req.output_dir = output_dir;
    req.config = to_core(*config);
    req.write_overlays = write_overlays != 0;
    fill_summary(runner::track_directory(req), out_summary);
    return CT_OK;
  });
}

ct_status ct_replay_manifest(const char* manifest_path, const char* output_dir,
                             ct_run_summary* out_summary) {
  if (!manifest_path || !output_dir)
    return fail(CT_ERR_INVALID_ARGUMENT, "ct_replay_manifest: NULL argument");
  return guarded([&] {
    fill_summary(runner::replay_manifest(manifest_path, output_dir), out_summary);
    return CT_OK;
  });
}

ct_status ct_evaluate(const char* pred_dir, const char* ref_dir, const char* latency_json,
                      const char* csv_path, const char* json_path, double budget_s,
                      ct_eval_summary* out_summary) {
  if (!pred_dir || !ref_dir)
    return fail(CT_ERR_INVALID_ARGUMENT, "ct_evaluate: NULL argument");
  return guarded([&] {
    runner::EvalRequest req;
    req.pred_dir = pred_dir;
    req.ref_dir = ref_dir;
    req.latency_json = latency_json ? latency_json : "";
    req.csv_path = csv_path ? csv_path : "";
    req.json_path = json_path ? json_path : "";
    req.budget_s = budget_s;
    metrics::MetricReport rep = runner::evaluate_directories(req);
    if (out_summary) {
      out_summary->frames = static_cast<int>(rep.rows.size());
      out_summary->valid_surface_frames = rep.valid_surface_count;
      out_summary->unit_is_mm = rep.unit_is_mm ? 1 : 0;
      out_summary->mean_dsc = rep.mean_dsc;
      out_summary->median_dsc = rep.median_dsc;
      out_summary->mean_hd95 = rep.mean_hd95;
      out_summary->median_hd95 = rep.median_hd95;
      out_summary->mean_msd = rep.mean_msd;
      out_summary->median_msd = rep.median_msd;
      out_summary->latency_frames = rep.latency_count;
      out_summary->mean_elapsed_s = rep.mean_elapsed_s;
      out_summary->budget_violations = rep.budget_violations;
    }
    return CT_OK;
  });
}

void ct_phantom_defaults(ct_phantom* phantom) {
  if (!phantom) return;
  synthcine::PhantomSpec d;
  phantom->size = d.width;
  phantom->frames = d.frames;
  phantom->center_x = 0.0;  // centered
  phantom->center_y = 0.0;
  phantom->semi_x = d.semi_x;
  phantom->semi_y = d.semi_y;
  phantom->amplitude_px = d.amplitude_px;
  phantom->period_frames = d.period_frames;
  phantom->deformation = d.deformation;
  phantom->noise_sigma = d.noise_sigma;
  phantom->drift_per_frame = d.drift_per_frame;
  phantom->seed = d.seed;
}

ct_status ct_generate_phantom(const ct_phantom* phantom, const char* out_dir) {
  if (!phantom || !out_dir)
    return fail(CT_ERR_INVALID_ARGUMENT, "ct_generate_phantom: NULL argument");
  return guarded([&] {
    synthcine::PhantomSpec spec;
    spec.width = phantom->size;
    spec.height = phantom->size;
    spec.frames = phantom->frames;
    spec.center_x = phantom->center_x > 0.0 ? phantom->center_x : phantom->size / 2.0;
    spec.center_y = phantom->center_y > 0.0 ? phantom->center_y : phantom->size / 2.0;
    spec.semi_x = phantom->semi_x;
    spec.semi_y = phantom->semi_y;
    spec.amplitude_px = phantom->amplitude_px;
    spec.period_frames = phantom->period_frames;
    spec.deformation = phantom->deformation;
    spec.noise_sigma = phantom->noise_sigma;
    spec.drift_per_frame = phantom->drift_per_frame;
    spec.seed = phantom->seed;
    synthcine::write_phantom(spec, out_dir);
    return CT_OK;
  });
}

}  // extern "C"
