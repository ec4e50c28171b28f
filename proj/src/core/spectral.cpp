// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace upb {

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite(const ComplexMatrix& X) {
  for (const Complex& v : X.flat())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::kInvalidArgument, "spectrogram contains non-finite values");
}

}  // namespace

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n);
  const double a0 = kind == WindowKind::kHamming ? 0.54 : 0.5;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = a0 - (1.0 - a0) * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

bool satisfies_cola(std::span<const double> window, std::size_t hop) {
  if (hop == 0 || window.empty()) return false;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t n = 0; n < hop; ++n) {
    double s = 0.0;
    for (std::size_t i = n; i < window.size(); i += hop) s += window[i];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return lo > 0.0 && (hi - lo) <= 1e-10 * hi;
}

StftConfig::StftConfig(std::size_t frame_length, std::size_t hop, std::size_t fft_size,
                       WindowKind window, int sample_rate)
    : frame_length_(frame_length),
      hop_(hop),
      fft_size_(fft_size),
      window_(window),
      sample_rate_(sample_rate) {
  if (frame_length_ < 2 || hop_ == 0)
    throw Error(ErrorCode::kInvalidArgument, "frame_length must be >= 2 and hop >= 1");
  if (hop_ > frame_length_)
    throw Error(ErrorCode::kInvalidArgument, "hop must not exceed frame_length");
  if (!std::has_single_bit(fft_size_) || fft_size_ < frame_length_)
    throw Error(ErrorCode::kInvalidArgument,
                "fft_size must be a power of two >= frame_length (got " +
                    std::to_string(fft_size_) + ")");
  if (sample_rate_ <= 0) throw Error(ErrorCode::kInvalidArgument, "sample_rate must be positive");
  if (!satisfies_cola(make_window(window_, frame_length_), hop_))
    throw Error(ErrorCode::kColaViolation,
                "window is not constant-overlap-add at hop " + std::to_string(hop_));
}

StftConfig StftConfig::defaults(int sample_rate) {
  return StftConfig(400, 100, 512, WindowKind::kHamming, sample_rate);
}

double StftConfig::bin_omega(std::size_t k) const noexcept {
  return 2.0 * kPi * static_cast<double>(k) * sample_rate_ / static_cast<double>(fft_size_);
}

std::size_t StftConfig::num_frames(std::size_t num_samples) const noexcept {
  return (num_samples + 2 * center_pad() - frame_length_) / hop_ + 1;
}

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw Error(ErrorCode::kEmptyInput, "waveform is empty");
  if (sample_rate_ <= 0) throw Error(ErrorCode::kInvalidArgument, "sample_rate must be positive");
  for (double v : samples_)
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "waveform has non-finite samples");
}

ComplexSpectrogram stft(const Waveform& x, const StftConfig& cfg) {
  if (x.sample_rate() != cfg.sample_rate())
    throw Error(ErrorCode::kSampleRateMismatch,
                "waveform rate " + std::to_string(x.sample_rate()) + " Hz != config rate " +
                    std::to_string(cfg.sample_rate()) + " Hz");
  if (x.size() < cfg.frame_length())
    throw Error(ErrorCode::kEmptyInput, "signal shorter than one frame (" +
                                            std::to_string(x.size()) + " < " +
                                            std::to_string(cfg.frame_length()) + ")");

  // Reflection padding (edge sample not repeated).
  const std::size_t pad = cfg.center_pad();
  const std::size_t n = x.size();
  std::vector<double> padded(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    padded[i] = x[pad - i];
    padded[pad + n + i] = x[n - 2 - i];
  }
  std::copy(x.samples().begin(), x.samples().end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

  const std::vector<double> window = make_window(cfg.window(), cfg.frame_length());
  const detail::RealFft fft(cfg.fft_size());
  const std::size_t frames = cfg.num_frames(n);
  ComplexSpectrogram out{ComplexMatrix(frames, cfg.num_bins()), cfg, n};

  std::vector<double> buf(cfg.fft_size(), 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = padded.data() + t * cfg.hop();
    for (std::size_t i = 0; i < cfg.frame_length(); ++i) buf[i] = src[i] * window[i];
    fft.forward(buf, out.data.row(t));
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& X) {
  const StftConfig& cfg = X.config;
  if (!satisfies_cola(make_window(cfg.window(), cfg.frame_length()), cfg.hop()))
    throw Error(ErrorCode::kColaViolation, "istft: config violates constant-overlap-add");
  if (X.bins() != cfg.num_bins())
    throw Error(ErrorCode::kShapeMismatch, "istft: bin count does not match fft_size");
  if (X.frames() == 0) throw Error(ErrorCode::kEmptyInput, "istft: no frames");
  check_finite(X.data);

  const std::vector<double> window = make_window(cfg.window(), cfg.frame_length());
  const detail::RealFft fft(cfg.fft_size());
  const std::size_t span = (X.frames() - 1) * cfg.hop() + cfg.frame_length();
  std::vector<double> acc(span, 0.0), norm(span, 0.0), frame(cfg.fft_size());

  for (std::size_t t = 0; t < X.frames(); ++t) {
    fft.inverse(X.data.row(t), frame);
    const std::size_t base = t * cfg.hop();
    for (std::size_t i = 0; i < cfg.frame_length(); ++i) {
      acc[base + i] += frame[i] * window[i];
      norm[base + i] += window[i] * window[i];
    }
  }

  const std::size_t pad = cfg.center_pad();
  std::size_t length = X.original_length;
  if (length == 0) length = span > 2 * pad ? span - 2 * pad : 0;
  if (length == 0) throw Error(ErrorCode::kEmptyInput, "istft: frames too few to cover padding");

  std::vector<double> y(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t j = i + pad;
    if (j < span && norm[j] > 1e-8) y[i] = acc[j] / norm[j];
  }
  return Waveform(std::move(y), cfg.sample_rate());
}

void apply_global_bias(ComplexSpectrogram& X, double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorCode::kInvalidArgument, "theta must be finite");
  const Complex rot = std::polar(1.0, -theta);
  for (Complex& v : X.data.flat()) v *= rot;
}

void apply_linear_bias(ComplexSpectrogram& X, double tau_shift) {
  const StftConfig& cfg = X.config;
  const double limit = static_cast<double>(cfg.frame_length()) / cfg.sample_rate();
  if (!std::isfinite(tau_shift) || tau_shift < 0.0 || tau_shift >= limit)
    throw Error(ErrorCode::kOutOfRange, "tau_shift must lie in [0, frame_length/sample_rate)");
  for (std::size_t k = 0; k < X.bins(); ++k) {
    const Complex rot = std::polar(1.0, -cfg.bin_omega(k) * tau_shift);
    for (std::size_t t = 0; t < X.frames(); ++t) X.data(t, k) *= rot;
  }
}

ComplexSpectrogram biased_stft(const Waveform& x, const StftConfig& cfg, double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorCode::kInvalidArgument, "theta must be finite");
  ComplexSpectrogram X = stft(x, cfg);
  apply_global_bias(X, theta);
  return X;
}

ComplexSpectrogram linear_biased_stft(const Waveform& x, const StftConfig& cfg, double tau_shift) {
  const double limit = static_cast<double>(cfg.frame_length()) / cfg.sample_rate();
  if (!std::isfinite(tau_shift) || tau_shift < 0.0 || tau_shift >= limit)
    throw Error(ErrorCode::kOutOfRange, "tau_shift must lie in [0, frame_length/sample_rate)");
  ComplexSpectrogram X = stft(x, cfg);
  apply_linear_bias(X, tau_shift);
  return X;
}

RealMatrix magnitude(const ComplexMatrix& X) {
  RealMatrix m(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.size(); ++i) m.data()[i] = std::abs(X.data()[i]);
  return m;
}

}  // namespace upb
