#include "mvlap/simd.hpp"

#include <cstdlib>
#include <string>

namespace mvlap::simd {

#if defined(MVLAP_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif
#if defined(MVLAP_HAVE_NEON)
const Kernels& neon_kernels();
#endif

namespace {

std::vector<const Kernels*> probe() {
  std::vector<const Kernels*> ks{&scalar_kernels()};
#if defined(MVLAP_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    ks.push_back(&avx2_kernels());
#endif
#if defined(MVLAP_HAVE_NEON)
  ks.push_back(&neon_kernels());
#endif
  return ks;
}

const Kernels* pick_default() {
  const auto& ks = available_kernels();
  if (const char* env = std::getenv("MVLAP_SIMD")) {
    const std::string want(env);
    for (const Kernels* k : ks)
      if (want == k->name) return k;
  }
  return ks.back();
}

const Kernels*& selection() {
  static const Kernels* sel = pick_default();
  return sel;
}

}  // namespace

const std::vector<const Kernels*>& available_kernels() {
  static const std::vector<const Kernels*> ks = probe();
  return ks;
}

const Kernels& active() { return *selection(); }

bool select(std::string_view name) {
  for (const Kernels* k : available_kernels()) {
    if (name == k->name) {
      selection() = k;
      return true;
    }
  }
  return false;
}

}  // namespace mvlap::simd
