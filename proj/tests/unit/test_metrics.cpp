// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "upb/metrics.hpp"
#include "upb/spectral.hpp"

using namespace upb;

namespace {

std::vector<double> tone(std::size_t n, double freq, double amp = 0.5, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * oracle::kPi * freq * double(i) / 16000.0 + phase);
  return x;
}

std::vector<double> scaled(std::vector<double> x, double s) {
  for (auto& v : x) v *= s;
  return x;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("segsnr") {
  const auto x = tone(16000, 440.0);
  const Waveform ref(x, 16000);
  CHECK(segsnr(ref, ref) == 35.0);

  SUBCASE("negated estimate loses 20*log10(2) per frame") {
    // One 32 ms frame of a sinusoid: noise energy is exactly four times the signal.
    const Waveform one(tone(512, 500.0), 16000);
    CHECK(segsnr(one, Waveform(scaled(tone(512, 500.0), -1.0), 16000)) ==
          doctest::Approx(-6.020599913279624).epsilon(1e-12));
    CHECK(segsnr(ref, Waveform(scaled(x, -1.0), 16000)) == doctest::Approx(-6.020599913279624).epsilon(1e-12));
  }
  SUBCASE("zero estimate is 0 dB") {
    CHECK(std::abs(segsnr(ref, Waveform(std::vector<double>(16000, 0.0), 16000))) < 1e-12);
  }
  SUBCASE("per-frame clamp") {
    // First half exact, second half replaced by noise of much larger power.
    auto est = x;
    std::mt19937_64 g(31);
    std::normal_distribution<double> n(0.0, 100.0);
    for (std::size_t i = 8192; i < est.size(); ++i) est[i] = n(g);
    const double s = segsnr(ref, Waveform(est, 16000));
    // 16 frames at +35 and 16 frames (incl. the partial tail) at -10.
    const double frames_total = std::ceil(16000.0 / 512.0);
    CHECK(s == doctest::Approx((16.0 * 35.0 + (frames_total - 16.0) * -10.0) / frames_total));
  }
  SUBCASE("silent frames are skipped") {
    auto y = x;
    for (std::size_t i = 0; i < 4096; ++i) y[i] = 0.0;
    auto est = y;
    for (std::size_t i = 0; i < 4096; ++i) est[i] = 0.3;  // huge error, but in silent frames
    CHECK(segsnr(Waveform(y, 16000), Waveform(est, 16000)) == 35.0);
  }
  SUBCASE("monotone in added white noise") {
    std::mt19937_64 g(32);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> unit(16000);
    for (auto& v : unit) v = n(g);
    double prev = 1e9;
    for (int k = 0; k < 20; ++k) {
      const double sigma = 1e-3 * std::pow(1.6, k);
      auto est = x;
      for (std::size_t i = 0; i < est.size(); ++i) est[i] += sigma * unit[i];
      const double s = segsnr(ref, Waveform(est, 16000));
      CHECK(s <= prev);
      CHECK(s >= -10.0);
      CHECK(s <= 35.0);
      prev = s;
    }
  }
  CHECK(code_of([&] { segsnr(ref, Waveform(tone(100, 1.0), 16000)); }) == ErrorCode::kShapeMismatch);
  CHECK(code_of([] {
          segsnr(Waveform(std::vector<double>(1000, 0.0), 16000), Waveform(std::vector<double>(1000, 0.1), 16000));
        }) == ErrorCode::kSilentReference);
  CHECK_THROWS_AS(segsnr(ref, ref, 0.0), Error);
}

TEST_CASE("sisnr") {
  const auto x = tone(16000, 440.0);
  const Waveform ref(x, 16000);
  CHECK(sisnr(ref, ref) == 35.0);
  CHECK(sisnr(ref, Waveform(scaled(x, 3.0), 16000)) == 35.0);
  // 440 Hz and 880 Hz over a whole number of periods are orthogonal.
  CHECK(sisnr(ref, Waveform(tone(16000, 880.0), 16000)) == -10.0);

  SUBCASE("value against the definition") {
    std::mt19937_64 g(33);
    std::normal_distribution<double> n(0.0, 0.05);
    auto est = x;
    for (auto& v : est) v += n(g);
    double mr = 0.0, me = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mr += x[i] / 16000.0;
      me += est[i] / 16000.0;
    }
    double dot = 0.0, rr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      dot += (x[i] - mr) * (est[i] - me);
      rr += (x[i] - mr) * (x[i] - mr);
    }
    double ts = 0.0, es = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = dot / rr * (x[i] - mr);
      ts += s * s;
      es += (est[i] - me - s) * (est[i] - me - s);
    }
    CHECK(sisnr(ref, Waveform(est, 16000)) == doctest::Approx(oracle::snr_db(ts, es)).epsilon(1e-10));
    for (double s : {0.01, 0.5, 40.0})
      CHECK(sisnr(ref, Waveform(scaled(est, s), 16000)) == doctest::Approx(oracle::snr_db(ts, es)).epsilon(1e-10));
  }
  SUBCASE("offset is removed") {
    auto est = x;
    for (auto& v : est) v += 0.25;
    CHECK(sisnr(ref, Waveform(est, 16000)) == 35.0);
  }
  CHECK(code_of([] {
          sisnr(Waveform(std::vector<double>(100, 0.2), 16000), Waveform(std::vector<double>(100, 0.1), 16000));
        }) == ErrorCode::kSilentReference);
  CHECK(code_of([&] { sisnr(ref, Waveform(tone(10, 1.0), 16000)); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("mag_spec_rel_err") {
  std::mt19937_64 g(34);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix a(5, 9);
  for (auto& v : a.flat()) v = {n(g), n(g)};
  CHECK(mag_spec_rel_err(a, a) == 0.0);
  auto b = a;
  for (auto& v : b.flat()) v *= std::polar(1.0, -1.234);
  CHECK(mag_spec_rel_err(a, b) < 1e-12);
  for (auto& v : b.flat()) v *= 2.0;
  CHECK(mag_spec_rel_err(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mag_spec_rel_err(ComplexMatrix(2, 2), ComplexMatrix(2, 2)) == 0.0);
  CHECK_THROWS_AS(mag_spec_rel_err(a, ComplexMatrix(5, 8)), Error);
}

TEST_CASE("normalize_pesq") {
  CHECK(normalize_pesq(1.0) == 0.0);
  CHECK(normalize_pesq(4.5) == doctest::Approx(0.958904109589041).epsilon(1e-14));
  CHECK(normalize_pesq(3.55) == doctest::Approx(0.698630136986301).epsilon(1e-14));
  CHECK(normalize_pesq(-0.5) == doctest::Approx(-0.410958904109589).epsilon(1e-14));
  CHECK(code_of([] { normalize_pesq(4.65); }) == ErrorCode::kOutOfRange);
  CHECK_THROWS_AS(normalize_pesq(-0.6), Error);
  CHECK_THROWS_AS(normalize_pesq(NAN), Error);
}

TEST_CASE("external PESQ ingest") {
  const auto dir = oracle::temp_dir("pesq");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  };
  CHECK(ingest_external_pesq(write("empty.csv", "")).empty());
  const auto one = ingest_external_pesq(write("one.csv", "clip1,3.41\n"));
  REQUIRE(one.size() == 1);
  CHECK(one.at("clip1") == 3.41);

  const auto many = ingest_external_pesq(write("many.csv", "a, 1.5\r\n\nb,4.5\n  c ,-0.5\n"));
  CHECK(many.size() == 3);
  CHECK(many.at("c") == -0.5);

  auto message_of = [](const std::filesystem::path& p) {
    try {
      ingest_external_pesq(p);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of(write("bad.csv", "a,1.0\nb;2.0\n")).find("line 2") != std::string::npos);
  CHECK(message_of(write("nan.csv", "a,abc\n")).find("line 1") != std::string::npos);
  CHECK(message_of(write("range.csv", "a,1\nb,2\nc,4.7\n")).find("line 3") != std::string::npos);
  CHECK(message_of(write("dup.csv", "a,1\na,2\n")).find("duplicate") != std::string::npos);
  CHECK(code_of([&] { ingest_external_pesq(dir / "missing.csv"); }) == ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}
