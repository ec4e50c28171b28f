// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/upb.h"

#include <cmath>
#include <algorithm>
#include <exception>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upb/augment.hpp"
#include "upb/losses.hpp"
#include "upb/metrics.hpp"
#include "upb/phasederiv.hpp"
#include "upb/spectral.hpp"
#include "upb/wav.hpp"

struct upb_waveform {
  upb::Waveform wave;
};

struct upb_spectrogram {
  upb::ComplexSpectrogram spec;
};

struct upb_matrix {
  upb::RealMatrix m;
};

struct upb_pesq_table {
  std::vector<std::pair<std::string, double>> entries;
};

namespace {

thread_local std::string g_last_error;

upb_status to_status(upb::ErrorCode code) {
  switch (code) {
    case upb::ErrorCode::kInvalidArgument: return UPB_ERR_INVALID_ARGUMENT;
    case upb::ErrorCode::kShapeMismatch: return UPB_ERR_SHAPE_MISMATCH;
    case upb::ErrorCode::kSampleRateMismatch: return UPB_ERR_SAMPLE_RATE_MISMATCH;
    case upb::ErrorCode::kColaViolation: return UPB_ERR_COLA_VIOLATION;
    case upb::ErrorCode::kOutOfRange: return UPB_ERR_OUT_OF_RANGE;
    case upb::ErrorCode::kEmptyInput: return UPB_ERR_EMPTY_INPUT;
    case upb::ErrorCode::kSilentReference: return UPB_ERR_SILENT_REFERENCE;
    case upb::ErrorCode::kMissingTerm: return UPB_ERR_MISSING_TERM;
    case upb::ErrorCode::kIo: return UPB_ERR_IO;
    case upb::ErrorCode::kFormat: return UPB_ERR_FORMAT;
  }
  return UPB_ERR_INTERNAL;
}

upb_status fail(upb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <typename Fn>
upb_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return UPB_OK;
  } catch (const upb::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(UPB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UPB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(UPB_ERR_INTERNAL, "unknown error");
  }
}

#define UPB_REQUIRE(ptr)                                                  \
  do {                                                                    \
    if ((ptr) == nullptr) return fail(UPB_ERR_NULL_POINTER, #ptr " is NULL"); \
  } while (0)

upb::WindowKind to_window(upb_window_kind k) {
  switch (k) {
    case UPB_WINDOW_HAMMING: return upb::WindowKind::kHamming;
    case UPB_WINDOW_HANN: return upb::WindowKind::kHann;
  }
  throw upb::Error(upb::ErrorCode::kInvalidArgument, "unknown window kind");
}

upb::StftConfig to_config(const upb_stft_config& c) {
  return upb::StftConfig(c.frame_length, c.hop, c.fft_size, to_window(c.window), c.sample_rate);
}

upb_stft_config from_config(const upb::StftConfig& c) {
  return {c.frame_length(), c.hop(), c.fft_size(),
          c.window() == upb::WindowKind::kHamming ? UPB_WINDOW_HAMMING : UPB_WINDOW_HANN,
          c.sample_rate()};
}

upb::PhaseSpectrogram to_phase(const upb_matrix& m) {
  for (double v : m.m.flat())
    if (!std::isfinite(v)) throw upb::Error(upb::ErrorCode::kInvalidArgument, "phase matrix has non-finite values");
  return upb::PhaseSpectrogram{m.m};
}

upb::LossTerms to_terms(const upb_loss_terms& t) {
  auto opt = [&](upb_loss_term i) -> std::optional<double> {
    return t.present[i] ? std::optional<double>(t.value[i]) : std::nullopt;
  };
  return {opt(UPB_TERM_MAG), opt(UPB_TERM_RI),  opt(UPB_TERM_TIME),   opt(UPB_TERM_ADV),
          opt(UPB_TERM_UPB), opt(UPB_TERM_WUPB), opt(UPB_TERM_UPB_ADV)};
}

upb::LossWeights to_weights(const upb_loss_weights& w) {
  upb::LossWeights out;
  for (std::size_t i = 0; i < 7; ++i) out.lambda[i] = w.lambda[i];
  out.c = w.c;
  return out;
}

upb::AugmentConfig to_augment(const upb_augment_config& c) {
  return {c.p_global, c.p_linear, c.p_magnoise, c.noise_variance, c.rng_seed};
}

upb_matrix* wrap(upb::RealMatrix m) { return new upb_matrix{std::move(m)}; }

}  // namespace

extern "C" {

const char* upb_version(void) { return "1.0.0"; }

const char* upb_status_name(upb_status status) {
  switch (status) {
    case UPB_OK: return "ok";
    case UPB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case UPB_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case UPB_ERR_SAMPLE_RATE_MISMATCH: return "sample rate mismatch";
    case UPB_ERR_COLA_VIOLATION: return "COLA violation";
    case UPB_ERR_OUT_OF_RANGE: return "out of range";
    case UPB_ERR_EMPTY_INPUT: return "empty input";
    case UPB_ERR_SILENT_REFERENCE: return "silent reference";
    case UPB_ERR_MISSING_TERM: return "missing term";
    case UPB_ERR_IO: return "I/O error";
    case UPB_ERR_FORMAT: return "format error";
    case UPB_ERR_NULL_POINTER: return "null pointer";
    case UPB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* upb_last_error(void) { return g_last_error.c_str(); }

void upb_stft_config_default(upb_stft_config* cfg, int sample_rate) {
  if (cfg != nullptr) *cfg = {400, 100, 512, UPB_WINDOW_HAMMING, sample_rate};
}

upb_status upb_stft_config_validate(const upb_stft_config* cfg) {
  UPB_REQUIRE(cfg);
  return guarded([&] { (void)to_config(*cfg); });
}

upb_status upb_waveform_create(const double* samples, size_t length, int sample_rate, upb_waveform** out) {
  UPB_REQUIRE(out);
  if (length > 0) UPB_REQUIRE(samples);
  return guarded([&] {
    std::vector<double> v(samples, samples + length);
    *out = new upb_waveform{upb::Waveform(std::move(v), sample_rate)};
  });
}

void upb_waveform_destroy(upb_waveform* wave) { delete wave; }
size_t upb_waveform_length(const upb_waveform* wave) { return wave ? wave->wave.size() : 0; }
int upb_waveform_sample_rate(const upb_waveform* wave) { return wave ? wave->wave.sample_rate() : 0; }
const double* upb_waveform_data(const upb_waveform* wave) {
  return wave ? wave->wave.samples().data() : nullptr;
}

upb_status upb_wav_read(const char* path, upb_waveform** out, upb_sample_format* format_out) {
  UPB_REQUIRE(path);
  UPB_REQUIRE(out);
  return guarded([&] {
    upb::WavAudio a = upb::read_wav(path);
    auto* w = new upb_waveform{upb::Waveform(std::move(a.samples), a.sample_rate)};
    if (format_out != nullptr)
      *format_out = a.format == upb::SampleFormat::kPcm16 ? UPB_SAMPLE_PCM16 : UPB_SAMPLE_FLOAT32;
    *out = w;
  });
}

upb_status upb_wav_write(const char* path, const upb_waveform* wave, upb_sample_format format) {
  UPB_REQUIRE(path);
  UPB_REQUIRE(wave);
  return guarded([&] {
    upb::write_wav(path, wave->wave.samples(), wave->wave.sample_rate(),
                   format == UPB_SAMPLE_PCM16 ? upb::SampleFormat::kPcm16 : upb::SampleFormat::kFloat32);
  });
}

upb_status upb_stft(const upb_waveform* x, const upb_stft_config* cfg, upb_spectrogram** out) {
  UPB_REQUIRE(x);
  UPB_REQUIRE(cfg);
  UPB_REQUIRE(out);
  return guarded([&] { *out = new upb_spectrogram{upb::stft(x->wave, to_config(*cfg))}; });
}

upb_status upb_biased_stft(const upb_waveform* x, const upb_stft_config* cfg, double theta,
                           upb_spectrogram** out) {
  UPB_REQUIRE(x);
  UPB_REQUIRE(cfg);
  UPB_REQUIRE(out);
  return guarded([&] { *out = new upb_spectrogram{upb::biased_stft(x->wave, to_config(*cfg), theta)}; });
}

upb_status upb_linear_biased_stft(const upb_waveform* x, const upb_stft_config* cfg, double tau_shift,
                                  upb_spectrogram** out) {
  UPB_REQUIRE(x);
  UPB_REQUIRE(cfg);
  UPB_REQUIRE(out);
  return guarded(
      [&] { *out = new upb_spectrogram{upb::linear_biased_stft(x->wave, to_config(*cfg), tau_shift)}; });
}

upb_status upb_istft(const upb_spectrogram* spec, upb_waveform** out) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(out);
  return guarded([&] { *out = new upb_waveform{upb::istft(spec->spec)}; });
}

upb_status upb_spectrogram_create(const upb_stft_config* cfg, size_t frames, const double* interleaved,
                                  size_t original_length, upb_spectrogram** out) {
  UPB_REQUIRE(cfg);
  UPB_REQUIRE(out);
  if (frames > 0) UPB_REQUIRE(interleaved);
  return guarded([&] {
    const upb::StftConfig c = to_config(*cfg);
    upb::ComplexMatrix data(frames, c.num_bins());
    for (std::size_t i = 0; i < data.size(); ++i) {
      data.data()[i] = {interleaved[2 * i], interleaved[2 * i + 1]};
      if (!std::isfinite(interleaved[2 * i]) || !std::isfinite(interleaved[2 * i + 1]))
        throw upb::Error(upb::ErrorCode::kInvalidArgument, "spectrogram contains non-finite values");
    }
    *out = new upb_spectrogram{upb::ComplexSpectrogram{std::move(data), c, original_length}};
  });
}

void upb_spectrogram_destroy(upb_spectrogram* spec) { delete spec; }
size_t upb_spectrogram_frames(const upb_spectrogram* spec) { return spec ? spec->spec.frames() : 0; }
size_t upb_spectrogram_bins(const upb_spectrogram* spec) { return spec ? spec->spec.bins() : 0; }

upb_status upb_spectrogram_config(const upb_spectrogram* spec, upb_stft_config* out) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(out);
  *out = from_config(spec->spec.config);
  return UPB_OK;
}

upb_status upb_spectrogram_copy_data(const upb_spectrogram* spec, double* interleaved, size_t length) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(interleaved);
  const auto& d = spec->spec.data;
  if (length != 2 * d.size())
    return fail(UPB_ERR_SHAPE_MISMATCH, "buffer must hold 2 * frames * bins doubles");
  for (std::size_t i = 0; i < d.size(); ++i) {
    interleaved[2 * i] = d.data()[i].real();
    interleaved[2 * i + 1] = d.data()[i].imag();
  }
  return UPB_OK;
}

upb_status upb_matrix_create(size_t rows, size_t cols, const double* data, upb_matrix** out) {
  UPB_REQUIRE(out);
  return guarded([&] {
    upb::RealMatrix m(rows, cols);
    if (data != nullptr) std::copy(data, data + rows * cols, m.data());
    *out = wrap(std::move(m));
  });
}

void upb_matrix_destroy(upb_matrix* m) { delete m; }
size_t upb_matrix_rows(const upb_matrix* m) { return m ? m->m.rows() : 0; }
size_t upb_matrix_cols(const upb_matrix* m) { return m ? m->m.cols() : 0; }
const double* upb_matrix_data(const upb_matrix* m) { return m ? m->m.data() : nullptr; }

upb_status upb_magnitude(const upb_spectrogram* spec, upb_matrix** out) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(out);
  return guarded([&] { *out = wrap(upb::magnitude(spec->spec.data)); });
}

upb_status upb_phase(const upb_spectrogram* spec, upb_matrix** out) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(out);
  return guarded([&] { *out = wrap(upb::phase_of(spec->spec).angles); });
}

upb_status upb_compress_magnitude(const upb_spectrogram* spec, double c, upb_matrix** out) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(out);
  return guarded([&] { *out = wrap(upb::compress_magnitude(spec->spec, c)); });
}

double upb_wrap_diff(double a, double b) { return upb::wrap_diff(a, b); }

upb_status upb_phase_derivatives(const upb_matrix* phase, upb_matrix** tpd, upb_matrix** fpd) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(tpd);
  UPB_REQUIRE(fpd);
  return guarded([&] {
    upb::PhaseDerivatives d = upb::phase_derivatives(to_phase(*phase));
    auto t = std::make_unique<upb_matrix>(upb_matrix{std::move(d.tpd)});
    *fpd = wrap(std::move(d.fpd));
    *tpd = t.release();
  });
}

upb_status upb_weighted_derivatives(const upb_matrix* phase, const upb_matrix* m_cmp, upb_matrix** tpd,
                                    upb_matrix** fpd, double* weight_sum_tpd, double* weight_sum_fpd) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(m_cmp);
  UPB_REQUIRE(tpd);
  UPB_REQUIRE(fpd);
  return guarded([&] {
    upb::WeightedPhaseDerivatives d = upb::weighted_derivatives(to_phase(*phase), m_cmp->m);
    auto t = std::make_unique<upb_matrix>(upb_matrix{std::move(d.tpd)});
    *fpd = wrap(std::move(d.fpd));
    *tpd = t.release();
    if (weight_sum_tpd != nullptr) *weight_sum_tpd = d.weight_sum_tpd;
    if (weight_sum_fpd != nullptr) *weight_sum_fpd = d.weight_sum_fpd;
  });
}

upb_status upb_disc_input(const upb_matrix* phase, const upb_matrix* mag, double* out, size_t length) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(mag);
  UPB_REQUIRE(out);
  return guarded([&] {
    const upb::DiscriminatorInput in = upb::assemble_disc_input(to_phase(*phase), mag->m);
    if (length != in.values.size())
      throw upb::Error(upb::ErrorCode::kShapeMismatch, "output buffer must hold 3 * T * F doubles");
    std::copy(in.values.begin(), in.values.end(), out);
  });
}

void upb_loss_weights_default(upb_loss_weights* w) {
  if (w == nullptr) return;
  const upb::LossWeights d = upb::LossWeights::defaults();
  for (std::size_t i = 0; i < 7; ++i) w->lambda[i] = d.lambda[i];
  w->c = d.c;
}

upb_status upb_loss_mag(const upb_matrix* mag, const upb_matrix* mag_hat, double c, double* out) {
  UPB_REQUIRE(mag);
  UPB_REQUIRE(mag_hat);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::loss_mag(mag->m, mag_hat->m, c); });
}

upb_status upb_loss_ri(const upb_spectrogram* x, const upb_spectrogram* x_hat, double c, double* out) {
  UPB_REQUIRE(x);
  UPB_REQUIRE(x_hat);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::loss_ri(x->spec.data, x_hat->spec.data, c); });
}

upb_status upb_loss_time(const upb_waveform* x, const upb_waveform* x_hat, double* out) {
  UPB_REQUIRE(x);
  UPB_REQUIRE(x_hat);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::loss_time(x->wave, x_hat->wave); });
}

upb_status upb_loss_upb(const upb_matrix* phase, const upb_matrix* phase_hat, double* out) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(phase_hat);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::loss_upb(to_phase(*phase), to_phase(*phase_hat)); });
}

upb_status upb_loss_wupb(const upb_matrix* phase, const upb_matrix* phase_hat, const upb_matrix* m_cmp_clean,
                         double* out) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(phase_hat);
  UPB_REQUIRE(m_cmp_clean);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::loss_wupb(to_phase(*phase), to_phase(*phase_hat), m_cmp_clean->m); });
}

upb_status upb_loss_adv(const double* scores, size_t count, double* out) {
  UPB_REQUIRE(out);
  if (count > 0) UPB_REQUIRE(scores);
  return guarded([&] { *out = upb::loss_adv({scores, count}); });
}

upb_status upb_loss_disc(const double* scores_clean_clean, size_t count_clean, const double* scores_clean_est,
                         const double* q_pesq, size_t count_est, double* out) {
  UPB_REQUIRE(out);
  if (count_clean > 0) UPB_REQUIRE(scores_clean_clean);
  if (count_est > 0) {
    UPB_REQUIRE(scores_clean_est);
    UPB_REQUIRE(q_pesq);
  }
  return guarded([&] {
    *out = upb::loss_disc({scores_clean_clean, count_clean}, {scores_clean_est, count_est},
                          {q_pesq, count_est});
  });
}

upb_status upb_composite(upb_composite_kind kind, const upb_loss_terms* terms, const upb_loss_weights* weights,
                         double* out) {
  UPB_REQUIRE(terms);
  UPB_REQUIRE(weights);
  UPB_REQUIRE(out);
  return guarded([&] {
    upb::CompositeKind k;
    switch (kind) {
      case UPB_COMPOSITE_ORIGINAL: k = upb::CompositeKind::kOriginal; break;
      case UPB_COMPOSITE_L1: k = upb::CompositeKind::kUpb; break;
      case UPB_COMPOSITE_L2: k = upb::CompositeKind::kWeightedUpb; break;
      case UPB_COMPOSITE_L3: k = upb::CompositeKind::kUpbDiscriminator; break;
      default: throw upb::Error(upb::ErrorCode::kInvalidArgument, "unknown composite kind");
    }
    *out = upb::composite(k, to_terms(*terms), to_weights(*weights)).composite;
  });
}

upb_status upb_grad_loss_upb(const upb_matrix* phase, const upb_matrix* phase_hat, upb_matrix** grad,
                             int* unreliable) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(phase_hat);
  UPB_REQUIRE(grad);
  return guarded([&] {
    upb::PhaseGradient g = upb::grad_loss_upb(to_phase(*phase), to_phase(*phase_hat));
    if (unreliable != nullptr) *unreliable = g.unreliable ? 1 : 0;
    *grad = wrap(std::move(g.d_phi_hat));
  });
}

upb_status upb_grad_loss_wupb(const upb_matrix* phase, const upb_matrix* phase_hat, const upb_matrix* m_cmp_clean,
                              upb_matrix** grad, int* unreliable) {
  UPB_REQUIRE(phase);
  UPB_REQUIRE(phase_hat);
  UPB_REQUIRE(m_cmp_clean);
  UPB_REQUIRE(grad);
  return guarded([&] {
    upb::PhaseGradient g = upb::grad_loss_wupb(to_phase(*phase), to_phase(*phase_hat), m_cmp_clean->m);
    if (unreliable != nullptr) *unreliable = g.unreliable ? 1 : 0;
    *grad = wrap(std::move(g.d_phi_hat));
  });
}

upb_status upb_segsnr(const upb_waveform* ref, const upb_waveform* est, double frame_ms, double* out) {
  UPB_REQUIRE(ref);
  UPB_REQUIRE(est);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::segsnr(ref->wave, est->wave, frame_ms); });
}

upb_status upb_sisnr(const upb_waveform* ref, const upb_waveform* est, double* out) {
  UPB_REQUIRE(ref);
  UPB_REQUIRE(est);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::sisnr(ref->wave, est->wave); });
}

upb_status upb_mag_spec_rel_err(const upb_spectrogram* a, const upb_spectrogram* b, double* out) {
  UPB_REQUIRE(a);
  UPB_REQUIRE(b);
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::mag_spec_rel_err(a->spec.data, b->spec.data); });
}

upb_status upb_normalize_pesq(double pesq, double* out) {
  UPB_REQUIRE(out);
  return guarded([&] { *out = upb::normalize_pesq(pesq); });
}

upb_status upb_pesq_ingest(const char* path, upb_pesq_table** out) {
  UPB_REQUIRE(path);
  UPB_REQUIRE(out);
  return guarded([&] {
    auto scores = upb::ingest_external_pesq(path);
    *out = new upb_pesq_table{{scores.begin(), scores.end()}};
  });
}

void upb_pesq_table_destroy(upb_pesq_table* table) { delete table; }
size_t upb_pesq_table_size(const upb_pesq_table* table) { return table ? table->entries.size() : 0; }

upb_status upb_pesq_table_entry(const upb_pesq_table* table, size_t index, const char** clip_id, double* score) {
  UPB_REQUIRE(table);
  UPB_REQUIRE(clip_id);
  UPB_REQUIRE(score);
  if (index >= table->entries.size()) return fail(UPB_ERR_OUT_OF_RANGE, "PESQ table index out of range");
  *clip_id = table->entries[index].first.c_str();
  *score = table->entries[index].second;
  return UPB_OK;
}

void upb_augment_config_default(upb_augment_config* cfg) {
  if (cfg != nullptr) *cfg = {0.5, 0.5, 0.5, 4e-6, 0};
}

upb_status upb_augment_spectrogram(const upb_spectrogram* spec, const upb_augment_config* cfg, uint64_t* rng_state,
                                   upb_spectrogram** out, upb_augment_record* record) {
  UPB_REQUIRE(spec);
  UPB_REQUIRE(cfg);
  UPB_REQUIRE(rng_state);
  UPB_REQUIRE(out);
  return guarded([&] {
    upb::Rng rng(*rng_state);
    auto [augmented, rec] = upb::augment_spectrogram(spec->spec, to_augment(*cfg), rng);
    *out = new upb_spectrogram{std::move(augmented)};
    *rng_state = rng.state();
    if (record != nullptr)
      *record = {rec.applied_global, rec.theta, rec.applied_linear, rec.tau_shift, rec.applied_magnoise};
  });
}

upb_status upb_gate_statistics(const upb_augment_config* cfg, size_t n_trials, uint64_t seed, int sample_rate,
                               double freq_out[3]) {
  UPB_REQUIRE(cfg);
  UPB_REQUIRE(freq_out);
  return guarded([&] {
    const auto f = upb::gate_statistics(to_augment(*cfg), n_trials, seed, sample_rate);
    std::copy(f.begin(), f.end(), freq_out);
  });
}

uint64_t upb_rng_stream(uint64_t seed, uint64_t index) { return upb::Rng::stream(seed, index).state(); }

double upb_rng_uniform(uint64_t* state) {
  if (state == nullptr) return 0.0;
  upb::Rng rng(*state);
  const double u = rng.uniform();
  *state = rng.state();
  return u;
}

}  // extern "C"
