// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>

#include "upb/spectral.hpp"
#include "upb/types.hpp"

namespace upb {

/// Principal value of (a - b) in (-pi, pi], via atan2(sin, cos) of the raw
/// difference. Exactly-pi differences map to +pi.
double wrap_diff(double a, double b) noexcept;

/// Wraps a single angle to (-pi, pi].
inline double wrap_angle(double a) noexcept { return wrap_diff(a, 0.0); }

// T x F matrix of angles in (-pi, pi].
struct PhaseSpectrogram {
  RealMatrix angles;

  std::size_t frames() const noexcept { return angles.rows(); }
  std::size_t bins() const noexcept { return angles.cols(); }
};

// Wrapped first differences along time ((T-1) x F) and frequency (T x (F-1)).
struct PhaseDerivatives {
  RealMatrix tpd;
  RealMatrix fpd;
};

struct WeightedPhaseDerivatives {
  RealMatrix tpd;
  RealMatrix fpd;
  double weight_sum_tpd = 0.0;
  double weight_sum_fpd = 0.0;
};

// Magnitude-derived weights for the two derivative grids. Each field sums to
// one, or is uniform 1/N when the raw sum is below 1e-12.
struct DerivativeWeights {
  RealMatrix tpd;
  RealMatrix fpd;
};

/// Channels [TPD padded with a trailing zero row, FPD padded with a trailing
/// zero column, magnitude], each T x F, stored channel-major.
struct DiscriminatorInput {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;  // 3 * frames * bins

  double at(std::size_t channel, std::size_t t, std::size_t f) const {
    return values[(channel * frames + t) * bins + f];
  }
};

/// Complex argument of every bin; exact zeros map to 0.
PhaseSpectrogram phase_of(const ComplexMatrix& X);
inline PhaseSpectrogram phase_of(const ComplexSpectrogram& X) { return phase_of(X.data); }

PhaseDerivatives phase_derivatives(const PhaseSpectrogram& phi);

/// |X|^c for c in (0, 1].
RealMatrix compress_magnitude(const ComplexMatrix& X, double c);
inline RealMatrix compress_magnitude(const ComplexSpectrogram& X, double c) {
  return compress_magnitude(X.data, c);
}

DerivativeWeights derivative_weights(const RealMatrix& m_cmp);

WeightedPhaseDerivatives weighted_derivatives(const PhaseSpectrogram& phi, const RealMatrix& m_cmp);

DiscriminatorInput assemble_disc_input(const PhaseSpectrogram& phi, const RealMatrix& mag);

}  // namespace upb
