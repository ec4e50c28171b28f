// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "upb/rng.hpp"
#include "upb/spectral.hpp"

namespace upb {

struct AugmentConfig {
  double p_global = 0.5;
  double p_linear = 0.5;
  double p_magnoise = 0.5;
  double noise_variance = 4e-6;  // magnitude^2
  std::uint64_t rng_seed = 0;

  // Throws kOutOfRange for probabilities outside [0, 1] or negative variance.
  void validate() const;
};

struct AugmentRecord {
  bool applied_global = false;
  double theta = 0.0;      // radians, [-pi, pi)
  bool applied_linear = false;
  double tau_shift = 0.0;  // seconds, [0, 2*pi/sample_rate)
  bool applied_magnoise = false;

  friend bool operator==(const AugmentRecord&, const AugmentRecord&) = default;
};

// Draws the gate decisions and bias parameters for one utterance, consuming
// the generator in a fixed order: global gate, theta, linear gate, tau, noise
// gate.
AugmentRecord sample_augmentation(const AugmentConfig& cfg, Rng& rng, int sample_rate);

// Applies the sampled augmentations in the order global bias, linear bias,
// magnitude noise. Noise is added to |X| and clamped at zero; phase is kept.
std::pair<ComplexSpectrogram, AugmentRecord> augment_spectrogram(const ComplexSpectrogram& X,
                                                                 const AugmentConfig& cfg, Rng& rng);

// Application frequency of {global, linear, magnoise} over n_trials gatings.
std::array<double, 3> gate_statistics(const AugmentConfig& cfg, std::size_t n_trials,
                                      std::uint64_t seed, int sample_rate = 16000);

}  // namespace upb
