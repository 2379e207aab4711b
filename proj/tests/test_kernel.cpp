#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mvlap/kernel.hpp"
#include "mvlap/rng.hpp"

using namespace mvlap;

namespace {

Mat random_mat(Rng& rng, std::size_t r, std::size_t c) {
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("kernel_eval matches the closed forms") {
  KernelSpec gauss{KernelKind::gaussian, 1.0, false};
  const Vec x{1.0, 2.0};
  CHECK(kernel_eval(gauss, x, x) == doctest::Approx(1.0));

  // |x-z|^2 = 2 with sigma = 1 gives exp(-1)
  const Vec z{2.0, 3.0};
  CHECK(kernel_eval(gauss, x, z) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  KernelSpec lin_bias{KernelKind::linear, 1.0, true};
  const Vec zero{0.0, 0.0};
  CHECK(kernel_eval(lin_bias, zero, zero) == doctest::Approx(1.0));

  CHECK_THROWS_AS(kernel_eval(gauss, Vec{1.0}, Vec{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(KernelKind::gaussian, -2.0, false).validate(),
                  std::invalid_argument);
}

TEST_CASE("kernel symmetry and the augmented-linear identity") {
  Rng rng(17);
  KernelSpec gauss{KernelKind::gaussian, 0.8, false};
  KernelSpec lin{KernelKind::linear, 1.0, false};
  KernelSpec lin_bias{KernelKind::linear, 1.0, true};
  for (int rep = 0; rep < 50; ++rep) {
    Vec x(4), z(4);
    for (auto& v : x) v = rng.normal();
    for (auto& v : z) v = rng.normal();
    CHECK(kernel_eval(gauss, x, z) == kernel_eval(gauss, z, x));
    CHECK(kernel_eval(lin, x, z) == kernel_eval(lin, z, x));
    CHECK(kernel_eval(lin_bias, x, z) ==
          doctest::Approx(kernel_eval(lin, x, z) + 1.0).epsilon(1e-14));
  }
}

TEST_CASE("gram is symmetric and matches entrywise dot products") {
  Rng rng(5);
  const Mat x = random_mat(rng, 3, 4);

  KernelSpec lin_bias{KernelKind::linear, 1.0, true};
  const Mat k = gram(lin_bias, x, x);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 1.0;  // augmented coordinate
      for (std::size_t c = 0; c < 4; ++c) s += x(i, c) * x(j, c);
      CHECK(k(i, j) == doctest::Approx(s).epsilon(1e-13));
      CHECK(std::fabs(k(i, j) - k(j, i)) <= 1e-12);
    }

  KernelSpec gauss{KernelKind::gaussian, 1.3, false};
  const Mat single = gram(gauss, random_mat(rng, 1, 2), random_mat(rng, 0, 2));
  CHECK(single.rows() == 1);
  CHECK(single.cols() == 0);
  Mat one_row = random_mat(rng, 1, 2);
  const Mat kg = gram(gauss, one_row, one_row);
  CHECK(kg.rows() == 1);
  CHECK(kg(0, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(gram(gauss, random_mat(rng, 2, 3), random_mat(rng, 2, 4)),
                  std::invalid_argument);
}

TEST_CASE("gaussian gram matrices are positive semidefinite") {
  Rng rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 2 + rng.below(20);
    const Mat x = random_mat(rng, n, 1 + rng.below(5));
    KernelSpec gauss{KernelKind::gaussian, 0.3 + rng.uniform01(), false};
    const Mat k = gram(gauss, x, x);
    const Vec ev = sym_eigenvalues(k);
    CHECK(ev.front() >= -1e-8);
  }
}

TEST_CASE("median_width on known point sets") {
  Mat two(2, 1);
  two(0, 0) = 0.0;
  two(1, 0) = 3.0;
  CHECK(median_width(two) == doctest::Approx(3.0));

  Mat three(3, 1);
  three(0, 0) = 0.0;
  three(1, 0) = 1.0;
  three(2, 0) = 2.0;
  // distances {1, 1, 2} -> median 1
  CHECK(median_width(three) == doctest::Approx(1.0));

  Mat dup(4, 2);  // all rows identical
  CHECK(median_width(dup) == doctest::Approx(0.0));

  CHECK_THROWS_AS(median_width(Mat(1, 2)), std::invalid_argument);
}

TEST_CASE("median_width subsampling stays close to the exhaustive answer") {
  Rng rng(31);
  Mat big(2100, 2);  // above the exhaustive cutoff
  for (std::size_t i = 0; i < big.rows(); ++i) {
    big(i, 0) = rng.normal();
    big(i, 1) = rng.normal();
  }
  Mat small(500, 2);
  for (std::size_t i = 0; i < small.rows(); ++i) {
    small(i, 0) = big(i, 0);
    small(i, 1) = big(i, 1);
  }
  const double sub = median_width(big);
  const double ref = median_width(small);
  CHECK(sub == doctest::Approx(ref).epsilon(0.1));  // same distribution, coarse agreement
}

TEST_CASE("labeled and unlabeled row blocks slice correctly") {
  Rng rng(41);
  const Mat k = random_mat(rng, 5, 5);
  const Mat kl = labeled_rows(k, 2);
  const Mat ku = unlabeled_rows(k, 2);
  CHECK(kl.rows() == 2);
  CHECK(ku.rows() == 3);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(kl(1, j) == k(1, j));
    CHECK(ku(0, j) == k(2, j));
    CHECK(ku(2, j) == k(4, j));
  }
}
