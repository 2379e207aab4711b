#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace mvlap::simd {

// Dispatch table for the arithmetic inner loops everything else is built on.
// Each backend must match the scalar reference up to accumulation-order
// rounding; tests/test_simd.cpp enforces this for every compiled backend.
struct Kernels {
  const char* name;
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i]-b[i])^2
  double (*sqdist)(const double* a, const double* b, std::size_t n);
  // y[i] += s*x[i]
  void (*axpy)(double s, const double* x, double* y, std::size_t n);
};

// Reference implementation, always present.
const Kernels& scalar_kernels();

// All backends compiled into this binary and usable on this CPU
// (scalar first, then in increasing preference).
const std::vector<const Kernels*>& available_kernels();

// Currently selected backend. Defaults to the most preferred available one;
// the MVLAP_SIMD environment variable ("scalar", "avx2", "neon") overrides
// the default at startup.
const Kernels& active();

// Force a backend by name. Returns false (and leaves the selection alone)
// if that backend is not compiled in or not supported by this CPU.
bool select(std::string_view name);

}  // namespace mvlap::simd
