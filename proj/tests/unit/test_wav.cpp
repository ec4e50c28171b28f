// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstring>
#include <fstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "upb/wav.hpp"

using namespace upb;

namespace {

void put16(std::string& s, std::uint16_t v) { s.append({char(v & 0xFF), char(v >> 8)}); }
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(char((v >> (8 * i)) & 0xFF));
}

// Minimal hand-built RIFF/WAVE file.
std::string wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                      const std::string& payload, bool extra_chunk = false) {
  std::string fmt;
  put16(fmt, format);
  put16(fmt, channels);
  put32(fmt, rate);
  put32(fmt, rate * channels * bits / 8);
  put16(fmt, std::uint16_t(channels * bits / 8));
  put16(fmt, bits);
  std::string body = "WAVE";
  body += "fmt ";
  put32(body, std::uint32_t(fmt.size()));
  body += fmt;
  if (extra_chunk) {
    body += "LIST";
    put32(body, 3);
    body += "abc";
    body.push_back('\0');  // pad byte for the odd-sized chunk
  }
  body += "data";
  put32(body, std::uint32_t(payload.size()));
  body += payload;
  std::string out = "RIFF";
  put32(out, std::uint32_t(body.size()));
  return out + body;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& b) {
  std::ofstream(dir / name, std::ios::binary) << b;
  return dir / name;
}

}  // namespace

TEST_CASE("wav round trips") {
  const auto dir = oracle::temp_dir("wav");
  const auto x = oracle::speech_like(1234, 51, 16000, 0.9);

  SUBCASE("float32 is exact to single precision") {
    write_wav(dir / "f.wav", x, 16000, SampleFormat::kFloat32);
    const auto a = read_wav(dir / "f.wav");
    CHECK(a.sample_rate == 16000);
    CHECK(a.format == SampleFormat::kFloat32);
    REQUIRE(a.samples.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(a.samples[i] == double(float(x[i])));
  }
  SUBCASE("pcm16 quantizes to 1/32768") {
    write_wav(dir / "p.wav", x, 22050, SampleFormat::kPcm16);
    const auto a = read_wav(dir / "p.wav");
    CHECK(a.sample_rate == 22050);
    CHECK(a.format == SampleFormat::kPcm16);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(a.samples[i] - x[i]) <= 0.5 / 32768.0 + 1e-12);
  }
  SUBCASE("pcm16 clamps out-of-range samples") {
    write_wav(dir / "c.wav", std::vector<double>{2.0, -2.0, 1.0, -1.0}, 16000, SampleFormat::kPcm16);
    const auto a = read_wav(dir / "c.wav");
    CHECK(a.samples[0] == 32767.0 / 32768.0);
    CHECK(a.samples[1] == -1.0);
    CHECK(a.samples[2] == 32767.0 / 32768.0);
    CHECK(a.samples[3] == -1.0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("wav reader handles hand-built files") {
  const auto dir = oracle::temp_dir("wavhand");
  std::string pcm;
  put16(pcm, 0x4000);  // 0.5
  put16(pcm, 0xC000);  // -0.5
  const auto a = read_wav(write_file(dir, "a.wav", wav_bytes(1, 1, 16000, 16, pcm, true)));
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == 0.5);
  CHECK(a.samples[1] == -0.5);

  std::string fl(8, '\0');
  const float v[2] = {0.25f, -1.5f};
  std::memcpy(fl.data(), v, 8);
  const auto b = read_wav(write_file(dir, "b.wav", wav_bytes(3, 1, 8000, 32, fl)));
  CHECK(b.samples[1] == -1.5);
  CHECK(b.sample_rate == 8000);

  auto code_of = [](const std::filesystem::path& p) {
    try {
      read_wav(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode{};
  };
  CHECK(code_of(write_file(dir, "stereo.wav", wav_bytes(1, 2, 16000, 16, pcm + pcm))) == ErrorCode::kFormat);
  CHECK(code_of(write_file(dir, "pcm24.wav", wav_bytes(1, 1, 16000, 24, "abcdef"))) == ErrorCode::kFormat);
  CHECK(code_of(write_file(dir, "junk.wav", "not a wav file at all")) == ErrorCode::kFormat);
  CHECK(code_of(write_file(dir, "trunc.wav", wav_bytes(1, 1, 16000, 16, pcm).substr(0, 30))) == ErrorCode::kFormat);
  CHECK(code_of(dir / "missing.wav") == ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}
