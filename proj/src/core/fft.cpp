// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace upb::detail {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// Planner calls are not thread-safe in FFTW; execution with new-array is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> real(n);
  auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int size = static_cast<int>(n);
  PlanPair p{fftw_plan_dft_r2c_1d(size, real.data(), spec, flags),
             fftw_plan_dft_c2r_1d(size, spec, real.data(), flags)};
  fftw_free(spec);
  if (p.forward == nullptr || p.inverse == nullptr)
    throw Error(ErrorCode::kInvalidArgument, "FFTW could not plan size " + std::to_string(n));
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  PlanPair p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<Complex> out) const {
  std::vector<double> scratch(in.begin(), in.end());
  // std::complex<double> is layout-compatible with fftw_complex.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), scratch.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) const {
  // c2r overwrites its input.
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

}  // namespace upb::detail
