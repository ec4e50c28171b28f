// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/phasederiv.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace upb {

namespace {

void require_grid(const PhaseSpectrogram& phi, const char* what) {
  if (phi.frames() < 2 || phi.bins() < 2)
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": need at least 2 frames and 2 bins (got " +
                    std::to_string(phi.frames()) + "x" + std::to_string(phi.bins()) + ")");
}

RealMatrix normalized(RealMatrix raw) {
  double sum = 0.0;
  for (double v : raw.flat()) sum += v;
  const double n = static_cast<double>(raw.size());
  for (double& v : raw.flat()) v = sum < 1e-12 ? 1.0 / n : v / sum;
  return raw;
}

}  // namespace

double wrap_diff(double a, double b) noexcept {
  const double d = a - b;
  const double w = std::atan2(std::sin(d), std::cos(d));
  // atan2 returns -pi for a negative-zero sine; the range is (-pi, pi].
  return w == -std::numbers::pi ? std::numbers::pi : w;
}

PhaseSpectrogram phase_of(const ComplexMatrix& X) {
  PhaseSpectrogram phi{RealMatrix(X.rows(), X.cols())};
  for (std::size_t i = 0; i < X.size(); ++i) {
    const Complex v = X.data()[i];
    double a = (v.real() == 0.0 && v.imag() == 0.0) ? 0.0 : std::arg(v);
    if (a == -std::numbers::pi) a = std::numbers::pi;
    phi.angles.data()[i] = a;
  }
  return phi;
}

PhaseDerivatives phase_derivatives(const PhaseSpectrogram& phi) {
  require_grid(phi, "phase_derivatives");
  const std::size_t T = phi.frames(), F = phi.bins();
  const RealMatrix& p = phi.angles;
  PhaseDerivatives d{RealMatrix(T - 1, F), RealMatrix(T, F - 1)};
  for (std::size_t t = 0; t + 1 < T; ++t)
    for (std::size_t f = 0; f < F; ++f) d.tpd(t, f) = wrap_diff(p(t + 1, f), p(t, f));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f + 1 < F; ++f) d.fpd(t, f) = wrap_diff(p(t, f + 1), p(t, f));
  return d;
}

RealMatrix compress_magnitude(const ComplexMatrix& X, double c) {
  if (!(c > 0.0 && c <= 1.0))
    throw Error(ErrorCode::kOutOfRange, "compression exponent must lie in (0, 1]");
  RealMatrix m(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.size(); ++i) m.data()[i] = std::pow(std::abs(X.data()[i]), c);
  return m;
}

DerivativeWeights derivative_weights(const RealMatrix& m) {
  const std::size_t T = m.rows(), F = m.cols();
  if (T < 2 || F < 2)
    throw Error(ErrorCode::kInvalidArgument, "derivative_weights: need at least 2x2 magnitudes");
  for (double v : m.flat())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::kInvalidArgument, "magnitudes must be finite and non-negative");
  RealMatrix wt(T - 1, F), wf(T, F - 1);
  for (std::size_t t = 0; t + 1 < T; ++t)
    for (std::size_t f = 0; f < F; ++f) wt(t, f) = m(t + 1, f) + m(t, f);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f + 1 < F; ++f) wf(t, f) = m(t, f + 1) + m(t, f);
  return {normalized(std::move(wt)), normalized(std::move(wf))};
}

WeightedPhaseDerivatives weighted_derivatives(const PhaseSpectrogram& phi, const RealMatrix& m_cmp) {
  require_same_shape(phi.angles, m_cmp, "weighted_derivatives");
  PhaseDerivatives d = phase_derivatives(phi);
  DerivativeWeights w = derivative_weights(m_cmp);
  WeightedPhaseDerivatives out{std::move(d.tpd), std::move(d.fpd), 0.0, 0.0};
  for (std::size_t i = 0; i < out.tpd.size(); ++i) {
    out.tpd.data()[i] *= w.tpd.data()[i];
    out.weight_sum_tpd += w.tpd.data()[i];
  }
  for (std::size_t i = 0; i < out.fpd.size(); ++i) {
    out.fpd.data()[i] *= w.fpd.data()[i];
    out.weight_sum_fpd += w.fpd.data()[i];
  }
  return out;
}

DiscriminatorInput assemble_disc_input(const PhaseSpectrogram& phi, const RealMatrix& mag) {
  require_same_shape(phi.angles, mag, "assemble_disc_input");
  const PhaseDerivatives d = phase_derivatives(phi);
  const std::size_t T = phi.frames(), F = phi.bins();
  DiscriminatorInput in{T, F, std::vector<double>(3 * T * F, 0.0)};
  auto cell = [&](std::size_t c, std::size_t t, std::size_t f) -> double& {
    return in.values[(c * T + t) * F + f];
  };
  for (std::size_t t = 0; t + 1 < T; ++t)
    for (std::size_t f = 0; f < F; ++f) cell(0, t, f) = d.tpd(t, f);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f + 1 < F; ++f) cell(1, t, f) = d.fpd(t, f);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f) cell(2, t, f) = mag(t, f);
  return in;
}

}  // namespace upb
