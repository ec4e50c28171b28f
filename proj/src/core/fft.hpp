// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>

#include "upb/types.hpp"

namespace upb::detail {

// Real <-> one-sided complex transforms of a fixed power-of-two size, backed
// by FFTW. Plans are cached per size; execution is safe from any thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // in: n real samples, out: n/2 + 1 bins, forward sign exp(-j...).
  void forward(std::span<const double> in, std::span<Complex> out) const;
  // in: n/2 + 1 bins, out: n samples, scaled by 1/n so inverse(forward(x)) == x.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace upb::detail
