// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <optional>
#include <span>

#include "upb/phasederiv.hpp"
#include "upb/spectral.hpp"
#include "upb/types.hpp"

namespace upb {

// lambda[0..6] hold the weights lambda1..lambda7.
struct LossWeights {
  std::array<double, 7> lambda{0.9, 0.1, 0.2, 0.05, 0.05, 0.05, 0.05};
  double c = 0.3;

  static LossWeights defaults() { return {}; }
  // Throws kInvalidArgument for negative/non-finite weights or c outside (0, 1].
  void validate() const;
};

enum class CompositeKind { kOriginal, kUpb, kWeightedUpb, kUpbDiscriminator };

const char* composite_name(CompositeKind kind) noexcept;

// Individual term values; absent terms are nullopt.
struct LossTerms {
  std::optional<double> mag, ri, time, adv, upb, wupb, upb_adv;
};

struct LossReport {
  LossTerms terms;
  CompositeKind kind = CompositeKind::kOriginal;
  double composite = 0.0;
};

struct PhaseGradient {
  RealMatrix d_phi_hat;
  // Set when any wrapped residual sits within 1e-3 of +-pi; the loss is not
  // differentiable there and the returned gradient is one-sided.
  bool unreliable = false;
  std::size_t flagged = 0;
};

double loss_mag(const RealMatrix& mag, const RealMatrix& mag_hat, double c);
double loss_ri(const ComplexMatrix& X, const ComplexMatrix& X_hat, double c);
double loss_time(const Waveform& x, const Waveform& x_hat);

double loss_upb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat);
double loss_wupb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat,
                 const RealMatrix& m_cmp_clean);

double loss_adv(std::span<const double> disc_scores);
double loss_disc(std::span<const double> scores_clean_clean,
                 std::span<const double> scores_clean_est, std::span<const double> q_pesq);

LossReport composite(CompositeKind kind, const LossTerms& terms, const LossWeights& w);

PhaseGradient grad_loss_upb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat);
PhaseGradient grad_loss_wupb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat,
                             const RealMatrix& m_cmp_clean);

}  // namespace upb
