// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Discriminator-input dump format:
//
//   bytes 0..7   ASCII "UPBTENS1"
//   bytes 8..11  header length N, uint32 little-endian
//   next N bytes UTF-8 JSON, e.g.
//                {"shape":[3,T,F],"dtype":"float64","byte_order":"little",
//                 "layout":"channel-major","channels":["tpd","fpd","magnitude"]}
//   remainder    prod(shape) float64 values, little-endian, C order

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace upb::harness {

struct DiscTensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

void write_disc_tensor(const std::filesystem::path& path, std::size_t frames, std::size_t bins,
                       std::span<const double> values);

// Throws std::runtime_error on a bad magic, header or payload size.
DiscTensor read_disc_tensor(const std::filesystem::path& path);

}  // namespace upb::harness
