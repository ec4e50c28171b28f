// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/harness/tensor_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace upb::harness {

namespace {
constexpr char kMagic[8] = {'U', 'P', 'B', 'T', 'E', 'N', 'S', '1'};
}

void write_disc_tensor(const std::filesystem::path& path, std::size_t frames, std::size_t bins,
                       std::span<const double> values) {
  if (values.size() != 3 * frames * bins) throw std::runtime_error("tensor size does not match 3 x T x F");
  nlohmann::ordered_json h;
  h["shape"] = {3, frames, bins};
  h["dtype"] = "float64";
  h["byte_order"] = "little";
  h["layout"] = "channel-major";
  h["channels"] = {"tpd", "fpd", "magnitude"};
  const std::string header = h.dump();

  std::string out(kMagic, sizeof kMagic);
  const auto n = static_cast<std::uint32_t>(header.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((n >> (8 * i)) & 0xFF));
  out += header;
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

DiscTensor read_disc_tensor(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  const std::vector<unsigned char> b((std::istreambuf_iterator<char>(f)), {});
  if (b.size() < 12 || std::memcmp(b.data(), kMagic, sizeof kMagic) != 0)
    throw std::runtime_error(path.string() + ": not a UPB tensor file");
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n |= std::uint32_t(b[8 + i]) << (8 * i);
  if (12 + std::size_t(n) > b.size()) throw std::runtime_error(path.string() + ": truncated header");
  const auto h = nlohmann::json::parse(b.begin() + 12, b.begin() + 12 + n);
  if (h.value("dtype", "") != "float64" || h.value("byte_order", "") != "little")
    throw std::runtime_error(path.string() + ": unsupported dtype or byte order");

  DiscTensor t;
  t.shape = h.at("shape").get<std::vector<std::size_t>>();
  std::size_t count = 1;
  for (std::size_t d : t.shape) count *= d;
  const std::size_t offset = 12 + n;
  if (b.size() - offset != count * 8)
    throw std::runtime_error(path.string() + ": payload size does not match shape");
  t.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= std::uint64_t(b[offset + 8 * i + k]) << (8 * k);
    t.values[i] = std::bit_cast<double>(bits);
  }
  return t;
}

}  // namespace upb::harness
