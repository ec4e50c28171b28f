/* Copyright 2026 The UPB Toolkit Authors
 * License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
 *
 * C interface of libupb: biased STFT transforms, wrapped phase derivatives,
 * phase-bias-invariant losses and their gradients, metrics and augmentation.
 *
 * Conventions:
 *  - Every fallible call returns upb_status; UPB_OK is 0. On failure the
 *    message is available from upb_last_error() on the calling thread until
 *    the next failing call on that thread.
 *  - Objects are opaque handles created by *_create / producing calls and
 *    released with the matching *_destroy. Destroy functions accept NULL.
 *  - Output handles are only written on success.
 *  - Matrices are row-major, rows = time frames, cols = frequency bins.
 *  - Complex data crosses the boundary as interleaved (re, im) doubles.
 */
#ifndef UPB_UPB_H_
#define UPB_UPB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(UPB_BUILDING_LIBRARY)
#    define UPB_API __declspec(dllexport)
#  else
#    define UPB_API __declspec(dllimport)
#  endif
#else
#  define UPB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum upb_status {
  UPB_OK = 0,
  UPB_ERR_INVALID_ARGUMENT = 1,
  UPB_ERR_SHAPE_MISMATCH = 2,
  UPB_ERR_SAMPLE_RATE_MISMATCH = 3,
  UPB_ERR_COLA_VIOLATION = 4,
  UPB_ERR_OUT_OF_RANGE = 5,
  UPB_ERR_EMPTY_INPUT = 6,
  UPB_ERR_SILENT_REFERENCE = 7,
  UPB_ERR_MISSING_TERM = 8,
  UPB_ERR_IO = 9,
  UPB_ERR_FORMAT = 10,
  UPB_ERR_NULL_POINTER = 11,
  UPB_ERR_INTERNAL = 12
} upb_status;

UPB_API const char* upb_version(void);
UPB_API const char* upb_status_name(upb_status status);
UPB_API const char* upb_last_error(void);

/* ---- configuration ------------------------------------------------------ */

typedef enum upb_window_kind { UPB_WINDOW_HAMMING = 0, UPB_WINDOW_HANN = 1 } upb_window_kind;

typedef struct upb_stft_config {
  size_t frame_length; /* samples */
  size_t hop;          /* samples */
  size_t fft_size;     /* power of two >= frame_length */
  upb_window_kind window;
  int sample_rate;     /* Hz */
} upb_stft_config;

/* 400 / 100 / 512, Hamming. */
UPB_API void upb_stft_config_default(upb_stft_config* cfg, int sample_rate);
/* UPB_ERR_COLA_VIOLATION when the window does not overlap-add to a constant. */
UPB_API upb_status upb_stft_config_validate(const upb_stft_config* cfg);

/* ---- waveforms ----------------------------------------------------------- */

typedef struct upb_waveform upb_waveform;

typedef enum upb_sample_format { UPB_SAMPLE_PCM16 = 0, UPB_SAMPLE_FLOAT32 = 1 } upb_sample_format;

UPB_API upb_status upb_waveform_create(const double* samples, size_t length, int sample_rate,
                                       upb_waveform** out);
UPB_API void upb_waveform_destroy(upb_waveform* wave);
UPB_API size_t upb_waveform_length(const upb_waveform* wave);
UPB_API int upb_waveform_sample_rate(const upb_waveform* wave);
UPB_API const double* upb_waveform_data(const upb_waveform* wave);

/* Mono 16-bit PCM or 32-bit float WAV. format_out may be NULL. */
UPB_API upb_status upb_wav_read(const char* path, upb_waveform** out, upb_sample_format* format_out);
UPB_API upb_status upb_wav_write(const char* path, const upb_waveform* wave, upb_sample_format format);

/* ---- spectrograms -------------------------------------------------------- */

typedef struct upb_spectrogram upb_spectrogram;

UPB_API upb_status upb_stft(const upb_waveform* x, const upb_stft_config* cfg, upb_spectrogram** out);
/* stft(x) * exp(-j*theta) */
UPB_API upb_status upb_biased_stft(const upb_waveform* x, const upb_stft_config* cfg, double theta,
                                   upb_spectrogram** out);
/* bin k of stft(x) * exp(-j*omega_k*tau_shift), tau_shift in seconds */
UPB_API upb_status upb_linear_biased_stft(const upb_waveform* x, const upb_stft_config* cfg,
                                          double tau_shift, upb_spectrogram** out);
UPB_API upb_status upb_istft(const upb_spectrogram* spec, upb_waveform** out);

/* interleaved holds frames * (fft_size/2 + 1) complex values. original_length
 * may be 0 when unknown. */
UPB_API upb_status upb_spectrogram_create(const upb_stft_config* cfg, size_t frames,
                                          const double* interleaved, size_t original_length,
                                          upb_spectrogram** out);
UPB_API void upb_spectrogram_destroy(upb_spectrogram* spec);
UPB_API size_t upb_spectrogram_frames(const upb_spectrogram* spec);
UPB_API size_t upb_spectrogram_bins(const upb_spectrogram* spec);
UPB_API upb_status upb_spectrogram_config(const upb_spectrogram* spec, upb_stft_config* out);
/* length must be 2 * frames * bins. */
UPB_API upb_status upb_spectrogram_copy_data(const upb_spectrogram* spec, double* interleaved,
                                             size_t length);

/* ---- real matrices ------------------------------------------------------- */

typedef struct upb_matrix upb_matrix;

/* data may be NULL for a zero matrix. */
UPB_API upb_status upb_matrix_create(size_t rows, size_t cols, const double* data, upb_matrix** out);
UPB_API void upb_matrix_destroy(upb_matrix* m);
UPB_API size_t upb_matrix_rows(const upb_matrix* m);
UPB_API size_t upb_matrix_cols(const upb_matrix* m);
UPB_API const double* upb_matrix_data(const upb_matrix* m);

UPB_API upb_status upb_magnitude(const upb_spectrogram* spec, upb_matrix** out);
/* Angles in (-pi, pi]; exact zeros have phase 0. */
UPB_API upb_status upb_phase(const upb_spectrogram* spec, upb_matrix** out);
/* |X|^c, c in (0, 1]. */
UPB_API upb_status upb_compress_magnitude(const upb_spectrogram* spec, double c, upb_matrix** out);

/* ---- phase derivatives --------------------------------------------------- */

/* Principal value of a - b in (-pi, pi]. */
UPB_API double upb_wrap_diff(double a, double b);

/* tpd: (T-1) x F, fpd: T x (F-1). */
UPB_API upb_status upb_phase_derivatives(const upb_matrix* phase, upb_matrix** tpd, upb_matrix** fpd);
/* Derivatives scaled by clean-magnitude weights; weight sums may be NULL. */
UPB_API upb_status upb_weighted_derivatives(const upb_matrix* phase, const upb_matrix* m_cmp,
                                            upb_matrix** tpd, upb_matrix** fpd,
                                            double* weight_sum_tpd, double* weight_sum_fpd);
/* Writes the 3 x T x F discriminator input (padded TPD, padded FPD,
 * magnitude) channel-major into out, which holds length = 3*T*F doubles. */
UPB_API upb_status upb_disc_input(const upb_matrix* phase, const upb_matrix* mag, double* out,
                                  size_t length);

/* ---- losses -------------------------------------------------------------- */

typedef struct upb_loss_weights {
  double lambda[7]; /* lambda1..lambda7 */
  double c;         /* compression exponent */
} upb_loss_weights;

/* [0.9, 0.1, 0.2, 0.05, 0.05, 0.05, 0.05], c = 0.3 */
UPB_API void upb_loss_weights_default(upb_loss_weights* w);

typedef enum upb_loss_term {
  UPB_TERM_MAG = 0,
  UPB_TERM_RI = 1,
  UPB_TERM_TIME = 2,
  UPB_TERM_ADV = 3,
  UPB_TERM_UPB = 4,
  UPB_TERM_WUPB = 5,
  UPB_TERM_UPB_ADV = 6,
  UPB_TERM_COUNT = 7
} upb_loss_term;

typedef struct upb_loss_terms {
  double value[UPB_TERM_COUNT];
  int present[UPB_TERM_COUNT];
} upb_loss_terms;

typedef enum upb_composite_kind {
  UPB_COMPOSITE_ORIGINAL = 0, /* l1*mag + l2*ri + l3*time + l4*adv */
  UPB_COMPOSITE_L1 = 1,       /* l1*mag + l4*adv + l5*upb */
  UPB_COMPOSITE_L2 = 2,       /* l1*mag + l4*adv + l6*wupb */
  UPB_COMPOSITE_L3 = 3        /* l1*mag + l6*wupb + l7*upb_adv */
} upb_composite_kind;

UPB_API upb_status upb_loss_mag(const upb_matrix* mag, const upb_matrix* mag_hat, double c, double* out);
UPB_API upb_status upb_loss_ri(const upb_spectrogram* x, const upb_spectrogram* x_hat, double c,
                               double* out);
UPB_API upb_status upb_loss_time(const upb_waveform* x, const upb_waveform* x_hat, double* out);
UPB_API upb_status upb_loss_upb(const upb_matrix* phase, const upb_matrix* phase_hat, double* out);
UPB_API upb_status upb_loss_wupb(const upb_matrix* phase, const upb_matrix* phase_hat,
                                 const upb_matrix* m_cmp_clean, double* out);
UPB_API upb_status upb_loss_adv(const double* scores, size_t count, double* out);
UPB_API upb_status upb_loss_disc(const double* scores_clean_clean, size_t count_clean,
                                 const double* scores_clean_est, const double* q_pesq, size_t count_est,
                                 double* out);
/* UPB_ERR_MISSING_TERM when a term the composite needs is not present. */
UPB_API upb_status upb_composite(upb_composite_kind kind, const upb_loss_terms* terms,
                                 const upb_loss_weights* weights, double* out);

/* Gradient w.r.t. phase_hat. unreliable (may be NULL) is set to 1 when a
 * wrapped residual lies within 1e-3 of +-pi. */
UPB_API upb_status upb_grad_loss_upb(const upb_matrix* phase, const upb_matrix* phase_hat,
                                     upb_matrix** grad, int* unreliable);
UPB_API upb_status upb_grad_loss_wupb(const upb_matrix* phase, const upb_matrix* phase_hat,
                                      const upb_matrix* m_cmp_clean, upb_matrix** grad,
                                      int* unreliable);

/* ---- metrics ------------------------------------------------------------- */

UPB_API upb_status upb_segsnr(const upb_waveform* ref, const upb_waveform* est, double frame_ms,
                              double* out);
UPB_API upb_status upb_sisnr(const upb_waveform* ref, const upb_waveform* est, double* out);
UPB_API upb_status upb_mag_spec_rel_err(const upb_spectrogram* a, const upb_spectrogram* b,
                                        double* out);
UPB_API upb_status upb_normalize_pesq(double pesq, double* out);

typedef struct upb_pesq_table upb_pesq_table;

/* Plain text, one `clip_id,score` per line. */
UPB_API upb_status upb_pesq_ingest(const char* path, upb_pesq_table** out);
UPB_API void upb_pesq_table_destroy(upb_pesq_table* table);
UPB_API size_t upb_pesq_table_size(const upb_pesq_table* table);
/* Entries are ordered by clip id; *clip_id stays valid while the table lives. */
UPB_API upb_status upb_pesq_table_entry(const upb_pesq_table* table, size_t index,
                                        const char** clip_id, double* score);

/* ---- augmentation -------------------------------------------------------- */

typedef struct upb_augment_config {
  double p_global;
  double p_linear;
  double p_magnoise;
  double noise_variance;
  uint64_t rng_seed;
} upb_augment_config;

typedef struct upb_augment_record {
  int applied_global;
  double theta;     /* radians */
  int applied_linear;
  double tau_shift; /* seconds */
  int applied_magnoise;
} upb_augment_record;

/* p = 0.5 each, variance 4e-6, seed 0. */
UPB_API void upb_augment_config_default(upb_augment_config* cfg);

/* rng_state is the 64-bit SplitMix64 state; it is advanced in place. */
UPB_API upb_status upb_augment_spectrogram(const upb_spectrogram* spec, const upb_augment_config* cfg,
                                           uint64_t* rng_state, upb_spectrogram** out,
                                           upb_augment_record* record);
/* freq_out[0..2] = application frequency of global, linear, magnitude noise. */
UPB_API upb_status upb_gate_statistics(const upb_augment_config* cfg, size_t n_trials, uint64_t seed,
                                       int sample_rate, double freq_out[3]);

/* Generator state for sub-stream `index` of `seed`, and draws from a state. */
UPB_API uint64_t upb_rng_stream(uint64_t seed, uint64_t index);
UPB_API double upb_rng_uniform(uint64_t* state);

#ifdef __cplusplus
}
#endif

#endif /* UPB_UPB_H_ */
