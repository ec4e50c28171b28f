// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/corpus_fixture.hpp"
#include "upb/harness/commands.hpp"
#include "upb/harness/corpus.hpp"
#include "upb/harness/tensor_file.hpp"

using namespace upb::harness;
using namespace testutil;

namespace {

CorpusOptions corpus_at(const std::filesystem::path& dir) {
  CorpusOptions c;
  c.corpus_dir = dir;
  return c;
}

double sisnr_of(const std::vector<double>& ref, const std::vector<double>& est) {
  const auto r = make_waveform(ref, 16000), e = make_waveform(est, 16000);
  double v = 0.0;
  check(upb_sisnr(r.get(), e.get(), &v));
  return v;
}

}  // namespace

TEST_CASE("roundtrip command") {
  unsetenv("UPB_SEED");
  const auto dir = make_corpus("rt", 4, 0.5);
  const auto out = oracle::temp_dir("rt_out");
  std::ostringstream log;
  const auto s = cmd_roundtrip(corpus_at(dir), out / "a.json", log);
  REQUIRE(s.clips.size() == 4);
  for (const auto& c : s.clips) {
    CHECK(c.segsnr_db == 35.0);
    CHECK(c.sisnr_db == 35.0);
  }
  CHECK(std::filesystem::exists(out / "a.txt"));
  cmd_roundtrip(corpus_at(dir), out / "b.json", log);
  CHECK(slurp(out / "a.json") == slurp(out / "b.json"));
  CHECK(slurp(out / "a.txt") == slurp(out / "b.txt"));

  SUBCASE("silent clip is an error") {
    const auto silent = oracle::temp_dir("rt_silent");
    write_clip(silent / "zeros.wav", std::vector<double>(8000, 0.0));
    CHECK_THROWS_WITH_AS(cmd_roundtrip(corpus_at(silent), out / "s.json", log),
                         doctest::Contains("silent reference"), std::runtime_error);
    std::filesystem::remove_all(silent);
  }
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(out);
}

TEST_CASE("bias command") {
  unsetenv("UPB_SEED");
  const auto dir = make_corpus("bias", 20, 0.5, 7);
  const auto o1 = oracle::temp_dir("bias1"), o2 = oracle::temp_dir("bias2"), o3 = oracle::temp_dir("bias3");
  std::ostringstream log;

  const auto s = cmd_bias({corpus_at(dir), o1, 99, std::nullopt}, log);
  REQUIRE(s.clips.size() == 20);
  CHECK(s.mean_sisnr() < 5.0);
  for (const auto& c : s.clips) {
    REQUIRE(c.theta.has_value());
    CHECK(*c.theta >= -oracle::kPi);
    CHECK(*c.theta < oracle::kPi);
    CHECK(*c.mag_rel_err < 1e-6);
    CHECK(std::filesystem::exists(o1 / (c.clip_id + ".wav")));
  }
  CHECK(std::filesystem::exists(o1 / "report.json"));
  CHECK(std::filesystem::exists(o1 / "report.txt"));

  SUBCASE("same seed, same output") {
    const auto again = cmd_bias({corpus_at(dir), o2, 99, std::nullopt}, log);
    for (std::size_t i = 0; i < 20; ++i) CHECK(again.clips[i].theta == s.clips[i].theta);
    CHECK(slurp(o1 / "clip005.wav") == slurp(o2 / "clip005.wav"));
    CHECK(slurp(o1 / "report.json") == slurp(o2 / "report.json"));
  }
  SUBCASE("other seed, other draws") {
    const auto other = cmd_bias({corpus_at(dir), o2, 100, std::nullopt}, log);
    CHECK(other.clips[0].theta != s.clips[0].theta);
  }
  SUBCASE("UPB_SEED wins over the option") {
    setenv("UPB_SEED", "99", 1);
    const auto env = cmd_bias({corpus_at(dir), o2, resolve_seed(5), std::nullopt}, log);
    unsetenv("UPB_SEED");
    CHECK(env.clips[3].theta == s.clips[3].theta);
  }
  SUBCASE("theta 0 degenerates to the roundtrip") {
    const auto zero = cmd_bias({corpus_at(dir), o3, 1, 0.0}, log);
    for (const auto& c : zero.clips) CHECK(c.segsnr_db == 35.0);
  }
  std::filesystem::remove_all(dir);
  for (const auto& p : {o1, o2, o3}) std::filesystem::remove_all(p);
}

TEST_CASE("loss weights file") {
  const auto dir = oracle::temp_dir("weights");
  const auto d = load_weights(std::nullopt);
  const double expect[7] = {0.9, 0.1, 0.2, 0.05, 0.05, 0.05, 0.05};
  for (int i = 0; i < 7; ++i) CHECK(d.lambda[i] == expect[i]);
  CHECK(d.c == 0.3);

  std::ofstream(dir / "ok.json") << R"({"lambda": [1, 0, 0, 0, 2, 0, 0], "c": 0.5})";
  const auto w = load_weights(dir / "ok.json");
  CHECK(w.lambda[4] == 2.0);
  CHECK(w.c == 0.5);
  std::ofstream(dir / "partial.json") << R"({"c": 1.0})";
  CHECK(load_weights(dir / "partial.json").lambda[0] == 0.9);

  for (const char* bad : {R"({"lambda": [1, 2]})", R"({"lambda": [1,1,1,1,1,1,-1]})", R"({"c": 0})",
                          R"({"gamma": 1})", R"([1, 2])", "not json", R"({"lambda": [1,1,1,1,1,1,"x"]})"}) {
    std::ofstream(dir / "bad.json") << bad;
    CHECK_THROWS_AS(load_weights(dir / "bad.json"), std::runtime_error);
  }
  CHECK_THROWS_AS(load_weights(dir / "missing.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("loss command") {
  unsetenv("UPB_SEED");
  const auto dir = make_corpus("loss", 1, 1.0, 3);
  const auto clean = dir / "clip000.wav";

  SUBCASE("identical inputs") {
    LossOptions o;
    o.clean_wav = o.est_wav = clean;
    const auto s = cmd_loss(o);
    for (int t : {UPB_TERM_MAG, UPB_TERM_RI, UPB_TERM_TIME, UPB_TERM_UPB, UPB_TERM_WUPB}) {
      REQUIRE(s.terms[t].has_value());
      CHECK(*s.terms[t] == 0.0);
    }
    CHECK_FALSE(s.terms[UPB_TERM_ADV].has_value());
    REQUIRE(s.composites.size() == 4);
    for (const auto& c : s.composites) {
      CHECK_FALSE(c.value.has_value());
      CHECK_FALSE(c.missing.empty());
    }
    const auto j = to_json(s);
    CHECK(j["lambda"][0] == 0.9);
    CHECK(j["terms"]["adv"].is_null());
    CHECK(j["composites"]["L1"].contains("missing"));
  }
  SUBCASE("with discriminator scores every composite is defined") {
    LossOptions o;
    o.clean_wav = o.est_wav = clean;
    o.adv_scores = {0.5, 1.0};
    o.upb_adv_scores = {0.0};
    const auto s = cmd_loss(o);
    CHECK(*s.terms[UPB_TERM_ADV] == 0.125);
    CHECK(*s.terms[UPB_TERM_UPB_ADV] == 1.0);
    CHECK(s.composites[0].name == "L_ori");
    CHECK(*s.composites[0].value == doctest::Approx(0.05 * 0.125));
    CHECK(*s.composites[3].value == doctest::Approx(0.05));
    CHECK(to_table(s).find("L3") != std::string::npos);
  }
  SUBCASE("a globally biased estimate is penalized by the old terms, barely by the phase-derivative ones") {
    const auto out = oracle::temp_dir("loss_bias");
    std::ostringstream log;
    cmd_bias({corpus_at(dir), out, 0, 1.3}, log);

    // Reference point: faint additive noise with a much smaller time-domain error.
    auto x = read_samples(clean);
    std::mt19937_64 g(5);
    std::normal_distribution<double> n(0.0, 0.005);
    for (auto& v : x) v += n(g);
    write_clip(out / "noisy.wav", x, 16000, UPB_SAMPLE_FLOAT32);

    LossOptions o;
    o.clean_wav = clean;
    o.est_wav = out / "clip000.wav";
    const auto biased = cmd_loss(o);
    o.est_wav = out / "noisy.wav";
    const auto noisy = cmd_loss(o);

    CHECK(*biased.terms[UPB_TERM_RI] > 0.1);
    CHECK(*biased.terms[UPB_TERM_TIME] > 5.0 * *noisy.terms[UPB_TERM_TIME]);
    // Resynthesis is not exactly bias-preserving in near-silent bins, so the
    // phase terms are small rather than zero. Measured ratios: ~0.12 and ~0.31.
    CHECK(*biased.terms[UPB_TERM_UPB] < 0.25 * *noisy.terms[UPB_TERM_UPB]);
    CHECK(*biased.terms[UPB_TERM_WUPB] < 0.5 * *noisy.terms[UPB_TERM_WUPB]);
    std::filesystem::remove_all(out);
  }
  SUBCASE("mismatched inputs") {
    write_clip(dir / "short.wav", oracle::speech_like(8000, 1));
    LossOptions o;
    o.clean_wav = clean;
    o.est_wav = dir / "short.wav";
    CHECK_THROWS_WITH_AS(cmd_loss(o), doctest::Contains("duration mismatch"), std::runtime_error);
    write_clip(dir / "rate.wav", oracle::speech_like(16000, 1), 8000);
    o.est_wav = dir / "rate.wav";
    CHECK_THROWS_AS(cmd_loss(o), std::runtime_error);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("augment command") {
  unsetenv("UPB_SEED");
  const auto dir = make_corpus("aug", 6, 0.25, 4);
  const auto cfgdir = oracle::temp_dir("aug_cfg");
  std::ostringstream log;

  SUBCASE("all probabilities zero copies inputs byte-for-byte") {
    std::ofstream(cfgdir / "zero.json") << R"({"p_global": 0, "p_linear": 0, "p_magnoise": 0})";
    const auto out = oracle::temp_dir("aug_zero");
    const auto s = cmd_augment({corpus_at(dir), out, cfgdir / "zero.json", std::nullopt}, log);
    CHECK(s.clip_count == 6);
    CHECK(s.frequencies == std::array<double, 3>{0.0, 0.0, 0.0});
    for (int i = 0; i < 6; ++i) {
      const std::string name = "clip00" + std::to_string(i);
      CHECK(slurp(dir / (name + ".wav")) == slurp(out / (name + ".wav")));
      CHECK(std::filesystem::exists(out / (name + ".json")));
    }
    CHECK(std::filesystem::exists(out / "summary.json"));
    std::filesystem::remove_all(out);
  }
  SUBCASE("fixed seed reproduces outputs and records") {
    const auto a = oracle::temp_dir("aug_a"), b = oracle::temp_dir("aug_b");
    const auto sa = cmd_augment({corpus_at(dir), a, std::nullopt, 31}, log);
    const auto sb = cmd_augment({corpus_at(dir), b, std::nullopt, 31}, log);
    for (int i = 0; i < 6; ++i) {
      const std::string name = "clip00" + std::to_string(i);
      CHECK(slurp(a / (name + ".wav")) == slurp(b / (name + ".wav")));
      CHECK(slurp(a / (name + ".json")) == slurp(b / (name + ".json")));
    }
    const auto rec = nlohmann::json::parse(slurp(a / "clip000.json"));
    CHECK(rec["record"]["global"].contains("applied"));
    CHECK(rec["record"]["linear"].contains("tau_shift"));
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
  }
  SUBCASE("phase-only augmentation keeps the waveform a valid clip") {
    std::ofstream(cfgdir / "phase.json") << R"({"p_global": 1, "p_linear": 1, "p_magnoise": 0, "rng_seed": 8})";
    const auto out = oracle::temp_dir("aug_phase");
    const auto s = cmd_augment({corpus_at(dir), out, cfgdir / "phase.json", std::nullopt}, log);
    CHECK(s.frequencies[0] == 1.0);
    CHECK(s.frequencies[1] == 1.0);
    CHECK(read_samples(out / "clip000.wav").size() == 4000);
    std::filesystem::remove_all(out);
  }
  SUBCASE("invalid configuration") {
    for (const char* bad : {R"({"p_global": 1.5})", R"({"noise_variance": -1})", R"({"p_other": 0.5})",
                            R"({"rng_seed": -4})"}) {
      std::ofstream(cfgdir / "bad.json") << bad;
      CHECK_THROWS_AS(load_augment_config(cfgdir / "bad.json"), std::runtime_error);
    }
  }
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(cfgdir);
}

TEST_CASE("augment gate frequencies over a 1000-clip corpus") {
  unsetenv("UPB_SEED");
  const auto dir = make_corpus("aug1000", 1000, 0.03, 9);
  const auto out = oracle::temp_dir("aug1000_out");
  std::ostringstream log;
  const auto s = cmd_augment({corpus_at(dir), out, std::nullopt, 2718}, log);
  CHECK(s.clip_count == 1000);
  for (double f : s.frequencies) CHECK(std::abs(f - 0.5) <= 0.047);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(out);
}

TEST_CASE("abx generation") {
  unsetenv("UPB_SEED");
  const auto dir = make_corpus("abxgen", 3, 0.5, 5);
  const auto out = oracle::temp_dir("abxgen_out");
  std::ostringstream log;

  const auto m = cmd_abx_gen({corpus_at(dir), out, 100, 12}, log);
  REQUIRE(m["trials"].size() == 100);
  CHECK(m["trials"][0]["trial_id"] == "t0001");
  CHECK(m["trials"][99]["trial_id"] == "t0100");
  CHECK(m["trials"][4]["clip_id"] == "clip001");
  for (int i : {0, 1, 2, 57}) {
    const auto& t = m["trials"][i];
    const std::string id = t["trial_id"];
    const auto x = read_samples(out / "audio" / id / "x.wav");
    const auto a = read_samples(out / "audio" / id / "a.wav");
    const auto b = read_samples(out / "audio" / id / "b.wav");
    const bool a_unbiased = t["unbiased"] == "a";
    CHECK((t["order"] == "unbiased-first") == a_unbiased);
    CHECK(sisnr_of(x, a_unbiased ? a : b) == 35.0);
    CHECK(sisnr_of(x, a_unbiased ? b : a) == doctest::Approx(t["sisnr_biased_db"].get<double>()).epsilon(1e-6));
  }
  CHECK(slurp(out / "manifest.json") == m.dump(2) + "\n");

  SUBCASE("order is balanced over 1000 trials") {
    const auto big = oracle::temp_dir("abxgen_big");
    const auto mb = cmd_abx_gen({corpus_at(dir), big, 1000, 77}, log);
    std::size_t first = 0;
    for (const auto& t : mb["trials"]) first += t["order"] == "unbiased-first";
    CHECK(std::abs(double(first) / 1000.0 - 0.5) <= 0.047);
    std::filesystem::remove_all(big);
  }
  SUBCASE("same seed, same session") {
    const auto again = oracle::temp_dir("abxgen_again");
    const auto m2 = cmd_abx_gen({corpus_at(dir), again, 100, 12}, log);
    CHECK(m2 == m);
    CHECK(slurp(again / "audio/t0042/b.wav") == slurp(out / "audio/t0042/b.wav"));
    std::filesystem::remove_all(again);
  }
  CHECK_THROWS_AS(cmd_abx_gen({corpus_at(dir), out, 0, 1}, log), std::runtime_error);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(out);
}

TEST_CASE("disc-input command") {
  const auto dir = make_corpus("disc", 1, 0.5, 6);
  const auto wav = dir / "clip000.wav";
  StftParams p;
  const auto s = cmd_disc_input(wav, dir / "t.bin", p, false);
  CHECK(s.frames == 81);
  CHECK(s.bins == 257);
  const auto t = read_disc_tensor(dir / "t.bin");
  REQUIRE(t.shape == std::vector<std::size_t>{3, 81, 257});

  const auto w = read_wav(wav.string());
  const auto X = stft(w.get(), p.for_rate(16000));
  const auto ph = phase(X.get());
  const auto mg = magnitude(X.get());
  std::vector<double> expect(3 * 81 * 257);
  check(upb_disc_input(ph.get(), mg.get(), expect.data(), expect.size()));
  CHECK(t.values == expect);

  write_clip(dir / "r8k.wav", oracle::speech_like(4000, 1), 8000);
  CHECK_THROWS_AS(cmd_disc_input(dir / "r8k.wav", dir / "u.bin", p, false), std::runtime_error);
  CHECK_NOTHROW(cmd_disc_input(dir / "r8k.wav", dir / "u.bin", p, true));
  std::filesystem::remove_all(dir);
}
