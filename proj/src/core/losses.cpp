// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/losses.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace upb {

namespace {

constexpr double kWrapGuard = 1e-3;

// Residual grids of a phase-derivative loss plus the per-cell weight applied
// inside the residual (1 for the unweighted loss).
struct Residuals {
  RealMatrix tpd, fpd;
  RealMatrix w_tpd, w_fpd;
  RealMatrix est_tpd, est_fpd;  // unweighted estimate derivatives
};

Residuals residuals(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat,
                    const RealMatrix* m_cmp_clean) {
  require_same_shape(phi.angles, phi_hat.angles, "phase loss");
  const PhaseDerivatives d = phase_derivatives(phi);
  PhaseDerivatives e = phase_derivatives(phi_hat);
  Residuals r;
  if (m_cmp_clean != nullptr) {
    require_same_shape(phi.angles, *m_cmp_clean, "weighted phase loss");
    DerivativeWeights w = derivative_weights(*m_cmp_clean);
    r.w_tpd = std::move(w.tpd);
    r.w_fpd = std::move(w.fpd);
  } else {
    r.w_tpd = RealMatrix(d.tpd.rows(), d.tpd.cols(), 1.0);
    r.w_fpd = RealMatrix(d.fpd.rows(), d.fpd.cols(), 1.0);
  }
  r.tpd = RealMatrix(d.tpd.rows(), d.tpd.cols());
  r.fpd = RealMatrix(d.fpd.rows(), d.fpd.cols());
  for (std::size_t i = 0; i < r.tpd.size(); ++i) {
    const double w = r.w_tpd.data()[i];
    r.tpd.data()[i] = wrap_diff(w * d.tpd.data()[i], w * e.tpd.data()[i]);
  }
  for (std::size_t i = 0; i < r.fpd.size(); ++i) {
    const double w = r.w_fpd.data()[i];
    r.fpd.data()[i] = wrap_diff(w * d.fpd.data()[i], w * e.fpd.data()[i]);
  }
  r.est_tpd = std::move(e.tpd);
  r.est_fpd = std::move(e.fpd);
  return r;
}

double half_mean_square(const RealMatrix& m) {
  double s = 0.0;
  for (double v : m.flat()) s += v * v;
  return 0.5 * s / static_cast<double>(m.size());
}

bool near_wrap(double v) { return std::abs(v) > std::numbers::pi - kWrapGuard; }

PhaseGradient gradient(const Residuals& r, std::size_t T, std::size_t F, bool weighted) {
  PhaseGradient g{RealMatrix(T, F), false, 0};
  const double nt = static_cast<double>(r.tpd.size());
  const double nf = static_cast<double>(r.fpd.size());
  // r = wrap(w*d - w*d_hat) with d_hat(t,f) = phi_hat(t+1,f) - phi_hat(t,f),
  // so dr/dphi_hat(t+1,f) = -w and dr/dphi_hat(t,f) = +w.
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t f = 0; f < F; ++f) {
      const double k = r.tpd(t, f) * r.w_tpd(t, f) / nt;
      g.d_phi_hat(t + 1, f) -= k;
      g.d_phi_hat(t, f) += k;
      if (near_wrap(r.tpd(t, f)) || (weighted && near_wrap(r.est_tpd(t, f)))) ++g.flagged;
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t f = 0; f + 1 < F; ++f) {
      const double k = r.fpd(t, f) * r.w_fpd(t, f) / nf;
      g.d_phi_hat(t, f + 1) -= k;
      g.d_phi_hat(t, f) += k;
      if (near_wrap(r.fpd(t, f)) || (weighted && near_wrap(r.est_fpd(t, f)))) ++g.flagged;
    }
  }
  g.unreliable = g.flagged > 0;
  return g;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": non-finite value");
}

}  // namespace

void LossWeights::validate() const {
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (!std::isfinite(lambda[i]) || lambda[i] < 0.0)
      throw Error(ErrorCode::kInvalidArgument,
                  "lambda" + std::to_string(i + 1) + " must be finite and >= 0");
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::kOutOfRange, "c must lie in (0, 1]");
}

const char* composite_name(CompositeKind kind) noexcept {
  switch (kind) {
    case CompositeKind::kOriginal: return "L_ori";
    case CompositeKind::kUpb: return "L1";
    case CompositeKind::kWeightedUpb: return "L2";
    case CompositeKind::kUpbDiscriminator: return "L3";
  }
  return "?";
}

double loss_mag(const RealMatrix& mag, const RealMatrix& mag_hat, double c) {
  require_same_shape(mag, mag_hat, "loss_mag");
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::kOutOfRange, "c must lie in (0, 1]");
  if (mag.empty()) throw Error(ErrorCode::kEmptyInput, "loss_mag: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double d = std::pow(mag.data()[i], c) - std::pow(mag_hat.data()[i], c);
    s += d * d;
  }
  return s / static_cast<double>(mag.size());
}

double loss_ri(const ComplexMatrix& X, const ComplexMatrix& X_hat, double c) {
  if (!X.same_shape(X_hat)) throw Error(ErrorCode::kShapeMismatch, "loss_ri: shape mismatch");
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::kOutOfRange, "c must lie in (0, 1]");
  if (X.empty()) throw Error(ErrorCode::kEmptyInput, "loss_ri: empty input");
  auto compress = [c](Complex v) {
    const double m = std::abs(v);
    return m == 0.0 ? Complex{} : v * (std::pow(m, c) / m);
  };
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) s += std::norm(compress(X.data()[i]) - compress(X_hat.data()[i]));
  return s / static_cast<double>(X.size());
}

double loss_time(const Waveform& x, const Waveform& x_hat) {
  if (x.size() != x_hat.size())
    throw Error(ErrorCode::kShapeMismatch, "loss_time: length mismatch (" + std::to_string(x.size()) +
                                               " vs " + std::to_string(x_hat.size()) + ")");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - x_hat[i]);
  return s / static_cast<double>(x.size());
}

double loss_upb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat) {
  const Residuals r = residuals(phi, phi_hat, nullptr);
  return half_mean_square(r.tpd) + half_mean_square(r.fpd);
}

double loss_wupb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat,
                 const RealMatrix& m_cmp_clean) {
  const Residuals r = residuals(phi, phi_hat, &m_cmp_clean);
  return half_mean_square(r.tpd) + half_mean_square(r.fpd);
}

double loss_adv(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "loss_adv: no discriminator scores");
  require_finite(scores, "loss_adv");
  double s = 0.0;
  for (double v : scores) s += (v - 1.0) * (v - 1.0);
  return s / static_cast<double>(scores.size());
}

double loss_disc(std::span<const double> cc, std::span<const double> ce, std::span<const double> q) {
  if (cc.empty() || ce.empty()) throw Error(ErrorCode::kEmptyInput, "loss_disc: no discriminator scores");
  if (ce.size() != q.size())
    throw Error(ErrorCode::kShapeMismatch, "loss_disc: estimate scores and Q_PESQ lengths differ");
  require_finite(cc, "loss_disc");
  require_finite(ce, "loss_disc");
  for (double v : q)
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::kOutOfRange, "loss_disc: Q_PESQ outside [0, 1]");
  double a = 0.0, b = 0.0;
  for (double v : cc) a += (v - 1.0) * (v - 1.0);
  for (std::size_t i = 0; i < ce.size(); ++i) b += (ce[i] - q[i]) * (ce[i] - q[i]);
  return a / static_cast<double>(cc.size()) + b / static_cast<double>(ce.size());
}

LossReport composite(CompositeKind kind, const LossTerms& terms, const LossWeights& w) {
  w.validate();
  const auto& l = w.lambda;
  auto need = [&](const std::optional<double>& v, const char* name) {
    if (!v)
      throw Error(ErrorCode::kMissingTerm,
                  std::string(composite_name(kind)) + " requires the '" + name + "' term");
    return *v;
  };
  double value = 0.0;
  switch (kind) {
    case CompositeKind::kOriginal:
      value = l[0] * need(terms.mag, "mag") + l[1] * need(terms.ri, "ri") +
              l[2] * need(terms.time, "time") + l[3] * need(terms.adv, "adv");
      break;
    case CompositeKind::kUpb:
      value = l[0] * need(terms.mag, "mag") + l[3] * need(terms.adv, "adv") +
              l[4] * need(terms.upb, "upb");
      break;
    case CompositeKind::kWeightedUpb:
      value = l[0] * need(terms.mag, "mag") + l[3] * need(terms.adv, "adv") +
              l[5] * need(terms.wupb, "wupb");
      break;
    case CompositeKind::kUpbDiscriminator:
      value = l[0] * need(terms.mag, "mag") + l[5] * need(terms.wupb, "wupb") +
              l[6] * need(terms.upb_adv, "upb_adv");
      break;
  }
  return {terms, kind, value};
}

PhaseGradient grad_loss_upb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat) {
  return gradient(residuals(phi, phi_hat, nullptr), phi.frames(), phi.bins(), false);
}

PhaseGradient grad_loss_wupb(const PhaseSpectrogram& phi, const PhaseSpectrogram& phi_hat,
                             const RealMatrix& m_cmp_clean) {
  return gradient(residuals(phi, phi_hat, &m_cmp_clean), phi.frames(), phi.bins(), true);
}

}  // namespace upb
