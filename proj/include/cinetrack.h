/* cinetrack -- real-time single-object mask propagation for grayscale
 * cine sequences, exposed as a C shared-library API. All functions return
 * a ct_status; details for the most recent failure on the calling thread
 * are available from ct_last_error(). Handles are opaque and must be
 * released with their destroy function. */

#ifndef CINETRACK_H
#define CINETRACK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_ERR_INVALID_ARGUMENT = 1,
  CT_ERR_IO = 2,
  CT_ERR_RUNTIME = 3
} ct_status;

const char* ct_version(void);

/* Message for the last failure on this thread; never NULL. */
const char* ct_last_error(void);

/* ------------------------------------------------------------------ */
/* Configuration                                                       */

typedef struct ct_config {
  int resolution;       /* working resolution (square), default 384 */
  int stride;           /* feature stride, default 4 */
  int write_cadence_k;  /* memory write cadence, default 5 */
  int capacity;         /* memory capacity in entries, default 64 */
  int top_k;            /* readout sparsity, default 8 */
  double temperature;   /* softmax temperature, default sqrt(15) */
  double ema_alpha;     /* temporal smoothing, default 0.5 */
  double threshold_tau; /* binarization threshold, default 0.5 */
  int connectivity;     /* 4 or 8, default 8 */
  double pad_factor;    /* ROI padding, default 2.0 */
  double budget_s;      /* per-frame latency budget, default 1.0 */
} ct_config;

void ct_config_defaults(ct_config* config);

/* ------------------------------------------------------------------ */
/* Streaming tracker                                                   */

typedef struct ct_tracker ct_tracker;

typedef struct ct_frame_info {
  double elapsed_s;
  int memory_entries;
  int fallback; /* 1 if the empty-prediction fallback fired */
} ct_frame_info;

/* frame0 is width*height row-major samples; mask0 is width*height bytes,
 * nonzero = foreground. bit_depth is 8 or 16. */
ct_status ct_tracker_create(const ct_config* config, int width, int height, int bit_depth,
                            const uint16_t* frame0, const uint8_t* mask0,
                            ct_tracker** out_tracker);

/* Processes the frame with the given index (must exceed all prior indices).
 * mask_out receives width*height bytes in {0,1}; info may be NULL. */
ct_status ct_tracker_step(ct_tracker* tracker, int frame_index, const uint16_t* pixels,
                          uint8_t* mask_out, ct_frame_info* info);

int ct_tracker_memory_entries(const ct_tracker* tracker);
void ct_tracker_destroy(ct_tracker* tracker);

/* ------------------------------------------------------------------ */
/* Whole-sequence runs on seqio directories                            */

typedef struct ct_run_summary {
  int frames;
  double mean_latency_s;
  double median_latency_s;
  double p95_latency_s;
  double max_latency_s;
  int budget_violations;
  int mean_within_budget;
  int fallback_count;
  int peak_memory_entries;
} ct_run_summary;

/* Writes mask_%05d.pgm per frame plus manifest.json and latency.json into
 * output_dir. first_mask may be NULL to use <input_dir>/mask_00000.pgm. */
ct_status ct_track_sequence(const char* input_dir, const char* first_mask,
                            const char* output_dir, const ct_config* config,
                            int write_overlays, ct_run_summary* out_summary);

/* Re-runs the configuration recorded in a manifest.json. */
ct_status ct_replay_manifest(const char* manifest_path, const char* output_dir,
                             ct_run_summary* out_summary);

/* ------------------------------------------------------------------ */
/* Evaluation                                                          */

typedef struct ct_eval_summary {
  int frames;
  int valid_surface_frames;
  int unit_is_mm;
  double mean_dsc, median_dsc;
  double mean_hd95, median_hd95;
  double mean_msd, median_msd;
  int latency_frames;
  double mean_elapsed_s;
  int budget_violations;
} ct_eval_summary;

/* latency_json, csv_path and json_path may be NULL. */
ct_status ct_evaluate(const char* pred_dir, const char* ref_dir, const char* latency_json,
                      const char* csv_path, const char* json_path, double budget_s,
                      ct_eval_summary* out_summary);

/* ------------------------------------------------------------------ */
/* Synthetic phantom generation                                        */

typedef struct ct_phantom {
  int size;            /* square image side */
  int frames;
  double center_x, center_y;  /* <= 0 centers the ellipse */
  double semi_x, semi_y;
  double amplitude_px;
  int period_frames;
  double deformation;
  double noise_sigma;
  double drift_per_frame;
  uint64_t seed;
} ct_phantom;

void ct_phantom_defaults(ct_phantom* phantom);

/* Writes frames, ground-truth masks and meta.json into out_dir. */
ct_status ct_generate_phantom(const ct_phantom* phantom, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* CINETRACK_H */
