// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "upb/types.hpp"

namespace upb {

enum class WindowKind { kHamming, kHann };

// Periodic window of length n (the DFT-even form, which is what makes
// Hamming/Hann constant-overlap-add at hops of n/2 and n/4).
std::vector<double> make_window(WindowKind kind, std::size_t n);

// Validated STFT parameters. Construction throws upb::Error when the hop is
// larger than the frame, the FFT size is not a power of two no smaller than
// the frame, or the window is not constant-overlap-add at the hop.
class StftConfig {
 public:
  StftConfig(std::size_t frame_length, std::size_t hop, std::size_t fft_size,
             WindowKind window, int sample_rate);

  // 400 / 100 / 512 Hamming at 16 kHz.
  static StftConfig defaults(int sample_rate = 16000);

  std::size_t frame_length() const noexcept { return frame_length_; }
  std::size_t hop() const noexcept { return hop_; }
  std::size_t fft_size() const noexcept { return fft_size_; }
  std::size_t num_bins() const noexcept { return fft_size_ / 2 + 1; }
  std::size_t center_pad() const noexcept { return frame_length_ / 2; }
  WindowKind window() const noexcept { return window_; }
  int sample_rate() const noexcept { return sample_rate_; }

  // Angular frequency of one-sided bin k in rad/s.
  double bin_omega(std::size_t k) const noexcept;
  std::size_t num_frames(std::size_t num_samples) const noexcept;

  friend bool operator==(const StftConfig&, const StftConfig&) = default;

 private:
  std::size_t frame_length_;
  std::size_t hop_;
  std::size_t fft_size_;
  WindowKind window_;
  int sample_rate_;
};

// True when sum_m w(n - m*hop) is constant (relative tolerance 1e-10).
bool satisfies_cola(std::span<const double> window, std::size_t hop);

class Waveform {
 public:
  // Throws kEmptyInput for no samples, kInvalidArgument for non-finite
  // samples or a non-positive rate.
  Waveform(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  int sample_rate() const noexcept { return sample_rate_; }
  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// One-sided T x (fft_size/2 + 1) spectrogram. `original_length` is the input
// length the frames were computed from; istft crops to it.
struct ComplexSpectrogram {
  ComplexMatrix data;
  StftConfig config;
  std::size_t original_length = 0;

  std::size_t frames() const noexcept { return data.rows(); }
  std::size_t bins() const noexcept { return data.cols(); }
};

ComplexSpectrogram stft(const Waveform& x, const StftConfig& cfg);
Waveform istft(const ComplexSpectrogram& X);

// stft(x) * exp(-j*theta) in every bin.
ComplexSpectrogram biased_stft(const Waveform& x, const StftConfig& cfg, double theta);

// stft(x) with bin k rotated by exp(-j*omega_k*tau_shift); tau_shift in
// seconds, 0 <= tau_shift < frame_length / sample_rate.
ComplexSpectrogram linear_biased_stft(const Waveform& x, const StftConfig& cfg, double tau_shift);

// In-place rotations shared by the biased transforms and augmentation.
void apply_global_bias(ComplexSpectrogram& X, double theta);
void apply_linear_bias(ComplexSpectrogram& X, double tau_shift);

RealMatrix magnitude(const ComplexMatrix& X);

}  // namespace upb
