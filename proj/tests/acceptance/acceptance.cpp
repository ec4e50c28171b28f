// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit status
// is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/corpus_fixture.hpp"
#include "support/gradient_check.hpp"
#include "support/oracles.hpp"
#include "support/random_grids.hpp"
#include "upb/augment.hpp"
#include "upb/harness/commands.hpp"
#include "upb/harness/tensor_file.hpp"
#include "upb/losses.hpp"
#include "upb/phasederiv.hpp"
#include "upb/spectral.hpp"
#include "upb/wav.hpp"

namespace {

using namespace upb;
namespace h = upb::harness;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

h::CorpusOptions corpus_at(const fs::path& dir) {
  h::CorpusOptions o;
  o.corpus_dir = dir;
  return o;
}

Outcome roundtrip_ceiling() {
  const auto dir = testutil::make_corpus("acc_a1", 24, 2.0, 11);
  const auto report = oracle::temp_dir("acc_a1_out") / "report.json";
  std::ostringstream log;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = h::cmd_roundtrip(corpus_at(dir), report, log);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t exact = 0;
  for (const auto& c : s.clips) exact += c.segsnr_db == 35.0 && c.sisnr_db == 35.0;
  fs::remove_all(dir);
  fs::remove_all(report.parent_path());
  return {s.clips.size() >= 20 && exact == s.clips.size() && secs < 60.0,
          fmt("%zu/%zu clips at SegSNR = SiSNR = 35.000, %.2f s", exact, s.clips.size(), secs)};
}

Outcome biased_phase_collapse() {
  const auto dir = testutil::make_corpus("acc_a2", 50, 2.0, 12);
  const auto out = oracle::temp_dir("acc_a2_out");
  std::ostringstream log;
  const auto s = h::cmd_bias({corpus_at(dir), out, 0, std::nullopt}, log);
  double worst_mag = 0.0;
  std::size_t collapsed = 0;
  for (const auto& c : s.clips) {
    worst_mag = std::max(worst_mag, c.mag_rel_err.value_or(1.0));
    collapsed += c.sisnr_db < 5.0;
  }
  const double frac = double(collapsed) / double(s.clips.size());
  fs::remove_all(dir);
  fs::remove_all(out);
  return {worst_mag < 1e-6 && frac >= 0.9,
          fmt("max magnitude rel err %.2e, SiSNR < 5 dB on %zu/%zu clips (%.0f%%), mean SiSNR %.3f dB",
              worst_mag, collapsed, s.clips.size(), 100.0 * frac, s.mean_sisnr())};
}

Outcome upb_invariance() {
  std::mt19937_64 g(13);
  std::uniform_int_distribution<std::size_t> dim(2, 64);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  double worst_upb = 0.0, worst_wupb = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t T = dim(g), F = dim(g);
    const auto phi = testutil::random_phase(g, T, F);
    const auto m = testutil::random_magnitude(g, T, F);
    const auto phi_hat = testutil::shifted(phi, th(g));
    const auto a = testutil::to_phase(phi), b = testutil::to_phase(phi_hat);
    worst_upb = std::max(worst_upb, loss_upb(a, b));
    worst_wupb = std::max(worst_wupb, loss_wupb(a, b, testutil::to_matrix(m)));
  }
  return {worst_upb < 1e-12 && worst_wupb < 1e-12,
          fmt("max loss_upb %.2e, max loss_wupb %.2e over 100 pairs", worst_upb, worst_wupb)};
}

Outcome gradient_oracle() {
  std::mt19937_64 g(14);
  double worst_upb = 0.0, worst_wupb = 0.0;
  std::size_t flagged = 0;
  for (int i = 0; i < 50; ++i) {
    const auto in = testutil::random_instance(g, 8, 8, 1e-3);
    const auto phi = testutil::to_phase(in.phi), phi_hat = testutil::to_phase(in.phi_hat);
    const auto gu = grad_loss_upb(phi, phi_hat);
    const auto gw = grad_loss_wupb(phi, phi_hat, testutil::to_matrix(in.m));
    flagged += gu.flagged + gw.flagged;
    worst_upb = std::max(worst_upb, testutil::max_rel_err(gu.d_phi_hat, testutil::fd_grad_upb(in, 1e-5)));
    worst_wupb = std::max(worst_wupb, testutil::max_rel_err(gw.d_phi_hat, testutil::fd_grad_wupb(in, 1e-5)));
  }
  return {worst_upb < 1e-4 && worst_wupb < 1e-4 && flagged == 0,
          fmt("max rel err upb %.2e, wupb %.2e, %zu cells flagged", worst_upb, worst_wupb, flagged)};
}

Outcome weight_normalization() {
  std::mt19937_64 g(15);
  double worst_sum = 0.0, worst_scale = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t T = 2 + i % 30, F = 2 + (7 * i) % 40;
    const auto phi = testutil::to_phase(testutil::random_phase(g, T, F));
    const auto phi_hat = testutil::to_phase(testutil::random_phase(g, T, F));
    const auto m = testutil::to_matrix(testutil::random_magnitude(g, T, F));
    const auto w = derivative_weights(m);
    double st = 0.0, sf = 0.0;
    for (double v : w.tpd.flat()) st += v;
    for (double v : w.fpd.flat()) sf += v;
    worst_sum = std::max({worst_sum, std::abs(st - 1.0), std::abs(sf - 1.0)});
    const double ref = loss_wupb(phi, phi_hat, m);
    for (double s : {1e-3, 1.0, 1e3}) {
      RealMatrix ms = m;
      for (double& v : ms.flat()) v *= s;
      worst_scale = std::max(worst_scale, std::abs(loss_wupb(phi, phi_hat, ms) - ref) / ref);
    }
  }
  return {worst_sum < 1e-9 && worst_scale < 1e-9,
          fmt("max |sum - 1| %.2e, max rel change under scaling %.2e", worst_sum, worst_scale)};
}

Outcome wrap_correctness() {
  const double example = wrap_diff(-3.0 * kPi / 4.0, 3.0 * kPi / 4.0);
  const bool example_ok = std::abs(example - kPi / 2.0) < 1e-15;
  std::mt19937_64 g(16);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::size_t bad_range = 0;
  double worst_cong = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    const double a = u(g), b = u(g);
    const double w = wrap_diff(a, b);
    bad_range += !(w > -kPi && w <= kPi);
    // w must differ from a - b by an integer multiple of 2 pi.
    const double k = (a - b - w) / (2.0 * kPi);
    worst_cong = std::max(worst_cong, std::abs(k - std::round(k)));
  }
  return {example_ok && bad_range == 0 && worst_cong < 1e-12,
          fmt("wrap_diff(-3pi/4, 3pi/4) = %.17g, %zu out of range, max congruence err %.2e", example,
              bad_range, worst_cong)};
}

Outcome composite_arithmetic() {
  const auto w = LossWeights::defaults();
  const double l1 = 0.9, l2 = 0.1, l3 = 0.2, l4 = 0.05, l5 = 0.05, l6 = 0.05, l7 = 0.05;
  const bool lambda_ok = w.lambda == std::array<double, 7>{l1, l2, l3, l4, l5, l6, l7};
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const LossTerms t{u(g), u(g), u(g), u(g), u(g), u(g), u(g)};
    const double ori = l1 * *t.mag + l2 * *t.ri + l3 * *t.time + l4 * *t.adv;
    const double c1 = l1 * *t.mag + l4 * *t.adv + l5 * *t.upb;
    const double c2 = l1 * *t.mag + l4 * *t.adv + l6 * *t.wupb;
    const double c3 = l1 * *t.mag + l6 * *t.wupb + l7 * *t.upb_adv;
    worst = std::max({worst, std::abs(composite(CompositeKind::kOriginal, t, w).composite - ori),
                      std::abs(composite(CompositeKind::kUpb, t, w).composite - c1),
                      std::abs(composite(CompositeKind::kWeightedUpb, t, w).composite - c2),
                      std::abs(composite(CompositeKind::kUpbDiscriminator, t, w).composite - c3)});
  }
  return {lambda_ok && worst < 1e-12, fmt("default weights %s, max abs err %.2e over 1000 term sets",
                                          lambda_ok ? "match" : "DIFFER", worst)};
}

Outcome augmentation_gating() {
  const AugmentConfig cfg;
  const auto f = gate_statistics(cfg, 1000, 18);
  bool in_band = true;
  for (double v : f) in_band = in_band && std::abs(v - 0.5) <= 0.047;
  bool identical = gate_statistics(cfg, 1000, 18) == f;

  // Whole-corpus runs with one seed must produce byte-identical outputs.
  const auto dir = testutil::make_corpus("acc_a8", 6, 1.0, 18);
  const auto out1 = oracle::temp_dir("acc_a8_1"), out2 = oracle::temp_dir("acc_a8_2");
  std::ostringstream log;
  h::cmd_augment({corpus_at(dir), out1, std::nullopt, 18}, log);
  h::cmd_augment({corpus_at(dir), out2, std::nullopt, 18}, log);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(out1)) {
    ++files;
    identical = identical && testutil::slurp(e.path()) == testutil::slurp(out2 / e.path().filename());
  }
  identical = identical && files > 0;
  fs::remove_all(dir);
  fs::remove_all(out1);
  fs::remove_all(out2);
  return {in_band && identical,
          fmt("frequencies global %.3f linear %.3f magnoise %.3f, repeat runs %s (%zu files)", f[0], f[1],
              f[2], identical ? "bit-identical" : "DIFFER", files)};
}

Outcome linear_bias_shift() {
  const auto cfg = StftConfig::defaults();
  constexpr std::size_t kShift = 3;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = oracle::speech_like(32000, 90 + seed, 16000, 0.5);
    const auto y = istft(linear_biased_stft(Waveform(x, 16000), cfg, kShift / 16000.0));
    for (std::size_t n = cfg.frame_length(); n + cfg.frame_length() < x.size(); ++n)
      worst = std::max(worst, std::abs(y[n] - x[n - kShift]));
  }
  return {worst < 1e-3, fmt("max interior error %.3e vs 3-sample delay (10 clips, peak 0.5)", worst)};
}

Outcome disc_input() {
  std::mt19937_64 g(19);
  std::uniform_int_distribution<std::size_t> dim(2, 40);
  bool layout_ok = true;
  for (int i = 0; i < 50; ++i) {
    const std::size_t T = dim(g), F = dim(g);
    const auto phi = testutil::random_phase(g, T, F);
    const auto m = testutil::random_magnitude(g, T, F);
    const auto in = assemble_disc_input(testutil::to_phase(phi), testutil::to_matrix(m));
    const auto dt = oracle::tpd(phi), df = oracle::fpd(phi);
    layout_ok = layout_ok && in.frames == T && in.bins == F && in.values.size() == 3 * T * F;
    for (std::size_t t = 0; t < T && layout_ok; ++t)
      for (std::size_t f = 0; f < F; ++f) {
        const double c0 = in.values[(0 * T + t) * F + f];
        const double c1 = in.values[(1 * T + t) * F + f];
        const double c2 = in.values[(2 * T + t) * F + f];
        const double e0 = t + 1 < T ? oracle::wrap(dt[t][f]) : 0.0;
        const double e1 = f + 1 < F ? oracle::wrap(df[t][f]) : 0.0;
        if (std::abs(c0 - e0) > 1e-12 || std::abs(c1 - e1) > 1e-12 || c2 != m[t][f]) layout_ok = false;
      }
  }

  // disc-input dump of a real clip: header shape and payload match the core.
  const auto dir = oracle::temp_dir("acc_a10");
  const auto x = oracle::speech_like(12345, 19);
  testutil::write_clip(dir / "clip.wav", x);
  const auto sum = h::cmd_disc_input(dir / "clip.wav", dir / "clip.upbt", {}, false);

  const std::string raw = testutil::slurp(dir / "clip.upbt");
  std::uint32_t hlen = 0;
  bool dump_ok = raw.size() > 12 && raw.compare(0, 8, "UPBTENS1") == 0;
  if (dump_ok) {
    for (int b = 3; b >= 0; --b) hlen = (hlen << 8) | static_cast<unsigned char>(raw[8 + b]);
    const auto header = nlohmann::json::parse(raw.substr(12, hlen));
    const std::vector<std::size_t> shape = header["shape"];
    dump_ok = shape == std::vector<std::size_t>{3, sum.frames, sum.bins} &&
              raw.size() == 12 + hlen + 8 * 3 * sum.frames * sum.bins;
  }
  const auto tensor = h::read_disc_tensor(dir / "clip.upbt");
  const auto wav = upb::read_wav(dir / "clip.wav");
  const auto X = stft(Waveform(wav.samples, wav.sample_rate), StftConfig::defaults());
  const auto ref = assemble_disc_input(phase_of(X.data), magnitude(X.data));
  dump_ok = dump_ok && tensor.shape == std::vector<std::size_t>{3, ref.frames, ref.bins} &&
            tensor.values == ref.values;
  fs::remove_all(dir);
  return {layout_ok && dump_ok, fmt("50 random grids %s, dump %zux%zux%zu %s", layout_ok ? "ok" : "WRONG",
                                    std::size_t{3}, sum.frames, sum.bins, dump_ok ? "round-trips" : "MISMATCH")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"A1  roundtrip ceiling", roundtrip_ceiling},
      {"A2  biased-phase collapse", biased_phase_collapse},
      {"A3  upb invariance", upb_invariance},
      {"A4  gradient oracle", gradient_oracle},
      {"A5  weight normalization", weight_normalization},
      {"A6  wrap correctness", wrap_correctness},
      {"A7  composite arithmetic", composite_arithmetic},
      {"A8  augmentation gating", augmentation_gating},
      {"A9  linear bias as delay", linear_bias_shift},
      {"A10 discriminator input", disc_input},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%-4s %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
