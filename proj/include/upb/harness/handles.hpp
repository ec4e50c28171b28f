// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// RAII ownership of libupb handles and status-to-exception translation.

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "upb/upb.h"

namespace upb::harness {

class ApiError : public std::runtime_error {
 public:
  ApiError(upb_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  upb_status status() const noexcept { return status_; }

 private:
  upb_status status_;
};

// Throws ApiError carrying upb_last_error() unless status is UPB_OK.
inline void check(upb_status status, std::string_view context = {}) {
  if (status == UPB_OK) return;
  std::string msg(context);
  if (!msg.empty()) msg += ": ";
  msg += upb_last_error();
  throw ApiError(status, msg);
}

template <typename T, void (*Destroy)(T*)>
struct HandleDeleter {
  void operator()(T* p) const noexcept { Destroy(p); }
};

using WaveformPtr = std::unique_ptr<upb_waveform, HandleDeleter<upb_waveform, upb_waveform_destroy>>;
using SpectrogramPtr =
    std::unique_ptr<upb_spectrogram, HandleDeleter<upb_spectrogram, upb_spectrogram_destroy>>;
using MatrixPtr = std::unique_ptr<upb_matrix, HandleDeleter<upb_matrix, upb_matrix_destroy>>;
using PesqTablePtr = std::unique_ptr<upb_pesq_table, HandleDeleter<upb_pesq_table, upb_pesq_table_destroy>>;

inline WaveformPtr make_waveform(std::span<const double> samples, int sample_rate) {
  upb_waveform* w = nullptr;
  check(upb_waveform_create(samples.data(), samples.size(), sample_rate, &w), "waveform");
  return WaveformPtr(w);
}

inline std::span<const double> samples_of(const upb_waveform* w) {
  return {upb_waveform_data(w), upb_waveform_length(w)};
}

inline std::span<const double> values_of(const upb_matrix* m) {
  return {upb_matrix_data(m), upb_matrix_rows(m) * upb_matrix_cols(m)};
}

inline WaveformPtr read_wav(const std::string& path, upb_sample_format* format = nullptr) {
  upb_waveform* w = nullptr;
  check(upb_wav_read(path.c_str(), &w, format), path);
  return WaveformPtr(w);
}

inline SpectrogramPtr stft(const upb_waveform* x, const upb_stft_config& cfg) {
  upb_spectrogram* s = nullptr;
  check(upb_stft(x, &cfg, &s), "stft");
  return SpectrogramPtr(s);
}

inline SpectrogramPtr biased_stft(const upb_waveform* x, const upb_stft_config& cfg, double theta) {
  upb_spectrogram* s = nullptr;
  check(upb_biased_stft(x, &cfg, theta, &s), "biased stft");
  return SpectrogramPtr(s);
}

inline WaveformPtr istft(const upb_spectrogram* s) {
  upb_waveform* w = nullptr;
  check(upb_istft(s, &w), "istft");
  return WaveformPtr(w);
}

inline MatrixPtr phase(const upb_spectrogram* s) {
  upb_matrix* m = nullptr;
  check(upb_phase(s, &m), "phase");
  return MatrixPtr(m);
}

inline MatrixPtr magnitude(const upb_spectrogram* s) {
  upb_matrix* m = nullptr;
  check(upb_magnitude(s, &m), "magnitude");
  return MatrixPtr(m);
}

inline MatrixPtr compress_magnitude(const upb_spectrogram* s, double c) {
  upb_matrix* m = nullptr;
  check(upb_compress_magnitude(s, c, &m), "compress magnitude");
  return MatrixPtr(m);
}

}  // namespace upb::harness
