/*
 * Copyright 2026 The barstress Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * barstress C API.
 *
 * EEG rhythm-ratio analysis: recording ingest (CSV, EDF), Welch power
 * spectral density, band power ratios over a session protocol, scalp
 * topographies, and 4PL / quartic curve fitting with R^2 and AIC.
 *
 * Conventions:
 *  - Objects are opaque handles created by bs_*_create/compute/read calls and
 *    released with the matching bs_*_free. Free functions accept NULL.
 *  - Fallible calls return bs_status. On failure the out-parameter is left
 *    untouched and bs_last_error() describes the problem; the message is
 *    thread-local and valid until the next failing call on the same thread.
 *  - Pointers returned by accessors (labels, sample arrays) stay valid for
 *    the lifetime of the owning handle.
 *  - Handles are immutable except where a setter says otherwise, and may be
 *    read concurrently from several threads.
 */

#ifndef BARSTRESS_BARSTRESS_H_
#define BARSTRESS_BARSTRESS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(BARSTRESS_BUILDING_LIBRARY)
#define BS_API __attribute__((visibility("default")))
#else
#define BS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bs_status {
  BS_OK = 0,
  BS_INVALID_ARGUMENT = 1,
  BS_IO_ERROR = 2,
  BS_EPOCH_OUT_OF_RANGE = 10,
  BS_EMPTY_PROTOCOL = 11,
  BS_NON_FINITE_SAMPLE = 12,
  BS_DUPLICATE_CHANNEL_LABEL = 13,
  BS_INVALID_MONTAGE = 14,
  BS_MALFORMED_ROW = 20,
  BS_NON_NUMERIC_SAMPLE = 21,
  BS_UNKNOWN_CHANNEL_LABEL = 22,
  BS_BAD_MAGIC = 23,
  BS_TRUNCATED_HEADER = 24,
  BS_TRUNCATED_DATA = 25,
  BS_INVALID_HEADER = 26,
  BS_MIXED_SAMPLING_RATES = 27,
  BS_DIGITAL_RANGE_DEGENERATE = 28,
  BS_EMPTY_SEGMENT = 30,
  BS_SEGMENT_TOO_LONG = 31,
  BS_INVALID_CONFIG = 32,
  BS_BAND_OUT_OF_RANGE = 33,
  BS_ZERO_DENOMINATOR_POWER = 34,
  BS_NON_POSITIVE_CURRENT = 35,
  BS_LENGTH_MISMATCH = 40,
  BS_ZERO_VECTOR = 41,
  BS_DEGENERATE_RANGE = 42,
  BS_UNDEFINED_AT_ZERO = 50,
  BS_TOO_FEW_POINTS = 51,
  BS_DEGENERATE_X = 52,
  BS_ZERO_TOTAL_VARIANCE = 53,
  BS_NON_POSITIVE_RSS = 54,
  BS_MISMATCHED_DATA = 55,
  BS_BAND_ABOVE_NYQUIST = 60,
  BS_OUT_OF_MEMORY = 90,
  BS_INTERNAL_ERROR = 91
} bs_status;

/* "EpochOutOfRange" style name of a status; "Ok" for BS_OK. */
BS_API const char* bs_status_name(bs_status status);
BS_API const char* bs_last_error(void);
BS_API const char* bs_version(void);

/* ---------------------------------------------------------------- buffers */

typedef struct bs_buffer bs_buffer;

BS_API const uint8_t* bs_buffer_data(const bs_buffer* buffer);
BS_API size_t bs_buffer_size(const bs_buffer* buffer);
BS_API void bs_buffer_free(bs_buffer* buffer);

/* --------------------------------------------------------------- montages */

typedef struct bs_montage bs_montage;

/* An existing file path, <BARSTRESS_MONTAGE_DIR>/<name>.json, or "default". */
BS_API bs_status bs_montage_load(const char* name_or_path, bs_montage** out);
BS_API bs_status bs_montage_from_json(const char* text, size_t length, bs_montage** out);
BS_API bs_status bs_montage_to_json(const bs_montage* montage, bs_buffer** out);
BS_API const char* bs_montage_name(const bs_montage* montage);
BS_API size_t bs_montage_electrode_count(const bs_montage* montage);
BS_API size_t bs_montage_eeg_count(const bs_montage* montage);
/* NULL when index is out of range. */
BS_API const char* bs_montage_label(const bs_montage* montage, size_t index);
BS_API int bs_montage_is_eeg(const bs_montage* montage, size_t index);
BS_API bs_status bs_montage_position(const bs_montage* montage, size_t index, double* x,
                                     double* y);
BS_API void bs_montage_free(bs_montage* montage);

/* ------------------------------------------------------------- recordings */

typedef struct bs_recording bs_recording;

typedef struct bs_csv_layout {
  char delimiter;
  int has_header;
  int has_time_column;
  size_t time_column;
} bs_csv_layout;

/* ',' delimiter, header row, no time column. */
BS_API bs_csv_layout bs_csv_layout_default(void);

/* samples is channel-major: channel c occupies samples[c * sample_count ...].
 * Each label must name a montage electrode, which supplies its position and
 * kind. */
BS_API bs_status bs_recording_create(const bs_montage* montage, const char* const* labels,
                                     size_t channel_count, const double* samples,
                                     size_t sample_count, double sampling_rate,
                                     bs_recording** out);
BS_API bs_status bs_recording_read_csv(const void* bytes, size_t length,
                                       const bs_csv_layout* layout, double sampling_rate,
                                       const bs_montage* montage, bs_recording** out);
BS_API bs_status bs_recording_read_edf(const void* bytes, size_t length,
                                       const bs_montage* montage, bs_recording** out);
BS_API bs_status bs_recording_write_csv(const bs_recording* recording,
                                        const bs_csv_layout* layout, bs_buffer** out);
BS_API bs_status bs_recording_write_edf(const bs_recording* recording, bs_buffer** out);

BS_API size_t bs_recording_channel_count(const bs_recording* recording);
BS_API size_t bs_recording_sample_count(const bs_recording* recording);
BS_API double bs_recording_sampling_rate(const bs_recording* recording);
BS_API const char* bs_recording_channel_label(const bs_recording* recording, size_t channel);
BS_API int bs_recording_channel_is_eeg(const bs_recording* recording, size_t channel);
/* bs_recording_sample_count() values in microvolts, or NULL. */
BS_API const double* bs_recording_channel_samples(const bs_recording* recording,
                                                  size_t channel);
BS_API void bs_recording_free(bs_recording* recording);

/* ------------------------------------------------------ bands and protocol */

typedef struct bs_band {
  const char* name;
  double f_low;  /* Hz */
  double f_high; /* Hz */
} bs_band;

/* delta 0.5-4, theta 4-8, alpha 8-13, beta 13-30 Hz. */
BS_API bs_status bs_band_standard(const char* name, bs_band* out);

typedef enum bs_phase {
  BS_PHASE_BASELINE = 0,
  BS_PHASE_DURING_GAMEPLAY = 1,
  BS_PHASE_AFTER_GAMEPLAY = 2
} bs_phase;

typedef enum bs_game_type {
  BS_GAME_PUZZLE = 0,
  BS_GAME_STRATEGIC = 1,
  BS_GAME_COMBINATIONAL = 2,
  BS_GAME_NONE = 3
} bs_game_type;

typedef enum bs_gamer_type { BS_GAMER = 0, BS_NON_GAMER = 1 } bs_gamer_type;

/* Relaxation music by pitch: low < 200 Hz, medium 200-600 Hz, high > 600 Hz. */
typedef enum bs_music_type {
  BS_MUSIC_LOW_PITCH = 0,
  BS_MUSIC_MEDIUM_PITCH = 1,
  BS_MUSIC_HIGH_PITCH = 2,
  BS_MUSIC_NO_MUSIC = 3,
  BS_MUSIC_NONE = 4
} bs_music_type;

typedef struct bs_protocol {
  bs_phase phase;
  bs_game_type game_type;
  bs_gamer_type gamer_type;
  bs_music_type music_type;
  const double* epoch_times; /* seconds from phase start */
  size_t epoch_count;
} bs_protocol;

/* Default schedule; epoch_times points at static storage. */
BS_API bs_protocol bs_protocol_default(bs_phase phase);

/* snake_case names, e.g. "during_gameplay", "non_gamer", "low_pitch". */
BS_API const char* bs_phase_name(bs_phase v);
BS_API const char* bs_game_type_name(bs_game_type v);
BS_API const char* bs_gamer_type_name(bs_gamer_type v);
BS_API const char* bs_music_type_name(bs_music_type v);
BS_API bs_status bs_phase_from_name(const char* name, bs_phase* out);
BS_API bs_status bs_game_type_from_name(const char* name, bs_game_type* out);
BS_API bs_status bs_gamer_type_from_name(const char* name, bs_gamer_type* out);
BS_API bs_status bs_music_type_from_name(const char* name, bs_music_type* out);

/* ---------------------------------------------------------------- spectra */

typedef enum bs_taper { BS_TAPER_HAMMING = 0, BS_TAPER_HANN = 1, BS_TAPER_RECTANGULAR = 2 } bs_taper;

BS_API bs_status bs_taper_from_name(const char* name, bs_taper* out);
BS_API const char* bs_taper_name(bs_taper taper);

typedef struct bs_welch_config {
  double window_len; /* seconds */
  int segment_count;
  double overlap_fraction;
  bs_taper taper;
  size_t fft_size; /* 0 = segment length */
} bs_welch_config;

/* 10 s window, 4 segments, 50% overlap, Hamming. */
BS_API bs_welch_config bs_welch_config_default(void);

/* U = (1/M) sum w(n)^2 of the periodic taper. */
BS_API bs_status bs_window_power_norm(bs_taper taper, size_t m, double* out);

typedef struct bs_psd bs_psd;

/* Welch PSD of the EEG channels over [t_start, t_start + window_len). */
BS_API bs_status bs_psd_compute(const bs_recording* recording, double t_start,
                                const bs_welch_config* config, bs_psd** out);
BS_API size_t bs_psd_bin_count(const bs_psd* psd);
BS_API const double* bs_psd_frequencies(const bs_psd* psd);
BS_API size_t bs_psd_channel_count(const bs_psd* psd);
BS_API const char* bs_psd_channel_label(const bs_psd* psd, size_t channel);
/* uV^2/Hz per bin, or NULL. */
BS_API const double* bs_psd_channel_power(const bs_psd* psd, size_t channel);
BS_API bs_status bs_psd_channel_band_power(const bs_psd* psd, size_t channel,
                                           const bs_band* band, double* out);
/* Channel-averaged; channels == NULL or count == 0 selects all. */
BS_API bs_status bs_psd_band_power(const bs_psd* psd, const bs_band* band,
                                   const size_t* channels, size_t count, double* out);
BS_API bs_status bs_psd_band_ratio(const bs_psd* psd, const bs_band* numerator,
                                   const bs_band* denominator, const size_t* channels,
                                   size_t count, double* out);
/* frequency_hz,power_uv2_per_hz */
BS_API bs_status bs_psd_write_channel_csv(const bs_psd* psd, size_t channel, bs_buffer** out);
BS_API void bs_psd_free(bs_psd* psd);

BS_API bs_status bs_power_ratio(double numerator_power, double denominator_power, double* out);
/* (current - baseline) / current */
BS_API bs_status bs_relative_increase(double current, double baseline, double* out);

/* ------------------------------------------------------------- BAR series */

typedef struct bs_bar_series bs_bar_series;

/* channels: labels of a channel subset, or NULL/0 for all EEG channels. */
BS_API bs_status bs_bar_series_compute(const bs_recording* recording,
                                       const bs_protocol* protocol,
                                       const bs_welch_config* config,
                                       const bs_band* numerator, const bs_band* denominator,
                                       const char* const* channels, size_t channel_count,
                                       double baseline, bs_bar_series** out);
BS_API size_t bs_bar_series_size(const bs_bar_series* series);
BS_API bs_status bs_bar_series_point(const bs_bar_series* series, size_t index,
                                     double* time_s, double* ratio);
BS_API double bs_bar_series_baseline(const bs_bar_series* series);
/* time_s,bar,phase,game_type,gamer_type,music_type */
BS_API bs_status bs_bar_series_write_csv(const bs_bar_series* series, bs_buffer** out);
BS_API void bs_bar_series_free(bs_bar_series* series);

/* ------------------------------------------------------------- regression */

typedef enum bs_model_type { BS_MODEL_4PL = 0, BS_MODEL_QUARTIC = 1 } bs_model_type;

typedef struct bs_fit_options {
  int max_iterations;
  double tolerance; /* relative RSS change */
  int multistart_count;
  double b_min;
  double b_max;
  double c_min;
  double c_max_factor; /* c <= c_max_factor * max(x) */
} bs_fit_options;

BS_API bs_fit_options bs_fit_options_default(void);

typedef struct bs_fit bs_fit;

typedef struct bs_fit_metrics {
  double rss;
  double r_squared;
  double aic; /* -INFINITY when interpolating */
  int n;
  int k;
  int converged;
  int iterations;
  int interpolating;
} bs_fit_metrics;

/* y = d + (a - d) / (1 + (x/c)^b); x in minutes. */
BS_API bs_status bs_fit_4pl(const double* x, const double* y, size_t n,
                            const bs_fit_options* options, bs_fit** out);
/* y = a + b x + c x^2 + d x^3 + e x^4 */
BS_API bs_status bs_fit_quartic(const double* x, const double* y, size_t n, bs_fit** out);
BS_API bs_model_type bs_fit_model_type(const bs_fit* fit);
/* Copies up to capacity parameters (a, b, c, d[, e]); returns the count. */
BS_API size_t bs_fit_params(const bs_fit* fit, double* out, size_t capacity);
BS_API bs_fit_metrics bs_fit_get_metrics(const bs_fit* fit);
BS_API bs_status bs_fit_predict(const bs_fit* fit, double x, double* out);
/* {model_type, params, rss, r_squared, aic, n, k, converged, iterations, interpolating} */
BS_API bs_status bs_fit_to_json(const bs_fit* fit, bs_buffer** out);
/* order_out receives count indices, best first (ascending AIC, then k, then RSS). */
BS_API bs_status bs_compare_fits(const bs_fit* const* fits, size_t count, size_t* order_out,
                                 int* overfit_warning);
BS_API void bs_fit_free(bs_fit* fit);

BS_API bs_status bs_eval_4pl(double a, double b, double c, double d, double x, double* out);
BS_API bs_status bs_r_squared(const double* observed, const double* predicted, size_t n,
                              double* out);
/* n ln(2 pi rss / n) + n + 2k */
BS_API bs_status bs_aic(double rss, int n, int k, double* out);

/* ------------------------------------------------------------ topography */

typedef struct bs_topo_grid bs_topo_grid;

typedef enum bs_palette { BS_PALETTE_BLUE_RED = 0, BS_PALETTE_GRAY = 1 } bs_palette;
typedef enum bs_topo_scalar { BS_TOPO_RATIO = 0, BS_TOPO_BAND_POWER = 1 } bs_topo_scalar;

/* One value per montage EEG electrode; capacity must be >= the EEG count. */
BS_API bs_status bs_topo_vector_from_psd(const bs_psd* psd, const bs_montage* montage,
                                         bs_topo_scalar scalar, const bs_band* numerator,
                                         const bs_band* denominator, double* out,
                                         size_t capacity);
BS_API bs_status bs_topo_interpolate(const double* values, size_t count,
                                     const bs_montage* montage, size_t resolution,
                                     bs_topo_grid** out);
BS_API size_t bs_topo_grid_resolution(const bs_topo_grid* grid);
BS_API bs_status bs_topo_grid_value(const bs_topo_grid* grid, size_t row, size_t col,
                                    double* value, int* masked);
BS_API void bs_topo_grid_palette_range(const bs_topo_grid* grid, double* lo, double* hi);
/* Mutates the grid's colour range. */
BS_API bs_status bs_topo_grid_set_palette_range(bs_topo_grid* grid, double lo, double hi);
BS_API bs_status bs_topo_grid_write_csv(const bs_topo_grid* grid, bs_buffer** out);
/* P6 PPM for BS_PALETTE_BLUE_RED, P5 PGM for BS_PALETTE_GRAY. */
BS_API bs_status bs_topo_render(const bs_topo_grid* grid, bs_palette palette, bs_buffer** out);
BS_API bs_status bs_topo_similarity(const double* a, const double* b, size_t n, double* out);
BS_API void bs_topo_grid_free(bs_topo_grid* grid);

/* ------------------------------------------------------------- synthesis */

typedef struct bs_band_target {
  bs_band band;
  double power; /* uV^2 */
} bs_band_target;

typedef struct bs_channel_target {
  const char* label;
  const char* band;
  double power;
} bs_channel_target;

typedef struct bs_synth_spec {
  double duration;      /* seconds */
  double sampling_rate; /* Hz */
  const bs_montage* montage; /* NULL = default */
  const bs_band_target* targets;
  size_t target_count;
  const bs_channel_target* channel_targets;
  size_t channel_target_count;
  double noise_floor; /* uV^2/Hz */
  uint64_t seed;
} bs_synth_spec;

BS_API bs_status bs_synth_eeg(const bs_synth_spec* spec, bs_recording** out);
BS_API const char* bs_synth_generator_name(void);
/* y_out[i] = model(times[i]) + N(0, sigma^2); params a..d (4PL) or a..e. */
BS_API bs_status bs_synth_trajectory(bs_model_type model, const double* params,
                                     size_t param_count, const double* times, size_t n,
                                     double sigma, uint64_t seed, double* y_out);

#ifdef __cplusplus
}
#endif

#endif /* BARSTRESS_BARSTRESS_H_ */
