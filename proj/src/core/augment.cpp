// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/augment.hpp"

#include <cmath>
#include <numbers>

#include "upb/rng.hpp"

namespace upb {

double Rng::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void AugmentConfig::validate() const {
  for (double p : {p_global, p_linear, p_magnoise})
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kOutOfRange, "augment probability outside [0, 1]");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw Error(ErrorCode::kOutOfRange, "noise_variance must be finite and >= 0");
}

AugmentRecord sample_augmentation(const AugmentConfig& cfg, Rng& rng, int sample_rate) {
  cfg.validate();
  if (sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample_rate must be positive");
  constexpr double kPi = std::numbers::pi;
  AugmentRecord rec;
  if (rng.uniform() < cfg.p_global) {
    rec.applied_global = true;
    rec.theta = rng.uniform(-kPi, kPi);
  }
  if (rng.uniform() < cfg.p_linear) {
    rec.applied_linear = true;
    rec.tau_shift = rng.uniform(0.0, 2.0 * kPi) / sample_rate;
  }
  rec.applied_magnoise = rng.uniform() < cfg.p_magnoise;
  return rec;
}

std::pair<ComplexSpectrogram, AugmentRecord> augment_spectrogram(const ComplexSpectrogram& X,
                                                                 const AugmentConfig& cfg, Rng& rng) {
  for (const Complex& v : X.data.flat())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::kInvalidArgument, "augment: spectrogram contains non-finite values");

  const AugmentRecord rec = sample_augmentation(cfg, rng, X.config.sample_rate());
  ComplexSpectrogram out = X;
  if (rec.applied_global) apply_global_bias(out, rec.theta);
  if (rec.applied_linear) apply_linear_bias(out, rec.tau_shift);
  if (rec.applied_magnoise) {
    const double sigma = std::sqrt(cfg.noise_variance);
    for (Complex& v : out.data.flat()) {
      const double m = std::abs(v);
      const double phase = m == 0.0 ? 0.0 : std::arg(v);
      v = std::polar(std::max(0.0, m + sigma * rng.normal()), phase);
    }
  }
  return {std::move(out), rec};
}

std::array<double, 3> gate_statistics(const AugmentConfig& cfg, std::size_t n_trials,
                                      std::uint64_t seed, int sample_rate) {
  if (n_trials == 0) throw Error(ErrorCode::kInvalidArgument, "gate_statistics: n_trials must be >= 1");
  Rng rng(seed);
  std::array<std::size_t, 3> hits{};
  for (std::size_t i = 0; i < n_trials; ++i) {
    const AugmentRecord r = sample_augmentation(cfg, rng, sample_rate);
    hits[0] += r.applied_global;
    hits[1] += r.applied_linear;
    hits[2] += r.applied_magnoise;
  }
  const auto n = static_cast<double>(n_trials);
  return {hits[0] / n, hits[1] / n, hits[2] / n};
}

}  // namespace upb
