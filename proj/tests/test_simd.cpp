#include <doctest.h>

#include <cmath>
#include <vector>

#include "mvlap/rng.hpp"
#include "mvlap/simd.hpp"

using namespace mvlap;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

}  // namespace

TEST_CASE("every compiled backend matches the scalar reference") {
  const auto& scalar = simd::scalar_kernels();
  const std::vector<std::size_t> sizes{0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17,
                                       31, 32, 33, 63, 100, 257, 1000};

  for (const simd::Kernels* k : simd::available_kernels()) {
    CAPTURE(k->name);
    Rng rng(42);
    for (std::size_t n : sizes) {
      CAPTURE(n);
      const auto a = random_vec(rng, n, 2.0);
      const auto b = random_vec(rng, n, 0.7);

      const double d_ref = scalar.dot(a.data(), b.data(), n);
      const double d_got = k->dot(a.data(), b.data(), n);
      CHECK(d_got == doctest::Approx(d_ref).epsilon(1e-12));

      const double s_ref = scalar.sqdist(a.data(), b.data(), n);
      const double s_got = k->sqdist(a.data(), b.data(), n);
      CHECK(s_got == doctest::Approx(s_ref).epsilon(1e-12));

      auto y_ref = random_vec(rng, n, 0.3);
      auto y_got = y_ref;
      scalar.axpy(1.7, a.data(), y_ref.data(), n);
      k->axpy(1.7, a.data(), y_got.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(y_got[i] == doctest::Approx(y_ref[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("backend selection is honoured and reversible") {
  const auto& ks = simd::available_kernels();
  REQUIRE(!ks.empty());
  CHECK(ks.front()->name == std::string("scalar"));

  const std::string before = simd::active().name;
  CHECK(simd::select("scalar"));
  CHECK(simd::active().name == std::string("scalar"));
  CHECK_FALSE(simd::select("definitely-not-a-backend"));
  CHECK(simd::active().name == std::string("scalar"));
  CHECK(simd::select(before));
  CHECK(simd::active().name == before);
}

TEST_CASE("scalar kernels compute the textbook sums") {
  const auto& k = simd::scalar_kernels();
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(k.dot(a, b, 3) == doctest::Approx(4.0 - 10.0 + 18.0));
  CHECK(k.sqdist(a, b, 3) == doctest::Approx(9.0 + 49.0 + 9.0));
  double y[] = {1.0, 1.0, 1.0};
  k.axpy(2.0, a, y, 3);
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(5.0));
  CHECK(y[2] == doctest::Approx(7.0));
}
