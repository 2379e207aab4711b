#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mvlap/graph.hpp"
#include "mvlap/rng.hpp"
#include "oracles.hpp"

using namespace mvlap;

namespace {

Mat random_points(Rng& rng, std::size_t n, std::size_t d) {
  Mat m(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

Vec random_vec(Rng& rng, std::size_t n) {
  Vec v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("adjacency basics: identical pair, exact weight, brute-force oracle") {
  Mat two(2, 2);  // identical rows
  const Mat w_id = adjacency(two, 1, 0.7);
  CHECK(w_id(0, 0) == 0.0);
  CHECK(w_id(1, 1) == 0.0);
  CHECK(w_id(0, 1) == doctest::Approx(1.0));
  CHECK(w_id(1, 0) == doctest::Approx(1.0));

  // squared distance 2 sigma^2 gives weight exp(-1)
  const double sigma = 0.9;
  Mat pair(2, 1);
  pair(0, 0) = 0.0;
  pair(1, 0) = std::sqrt(2.0) * sigma;
  const Mat w = adjacency(pair, 1, sigma);
  CHECK(w(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 5 + rng.below(10);
    const Mat x = random_points(rng, n, 2);
    const int k = 2;
    const Mat got = adjacency(x, k, 0.8);
    const Mat want = oracle::knn_adjacency(x, k, 0.8);
    for (std::size_t i = 0; i < n; ++i) {
      int nonzeros = 0;
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(1e-13));
        CHECK(got(i, j) == got(j, i));
        if (got(i, j) != 0.0) ++nonzeros;
      }
      CHECK(got(i, i) == 0.0);
      CHECK(nonzeros >= k);          // own neighbours
      CHECK(nonzeros <= int(n) - 1); // union with everyone who chose i
    }
  }
}

TEST_CASE("adjacency rejects bad arguments") {
  Mat x(3, 2);
  CHECK_THROWS_AS(adjacency(x, 3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(adjacency(x, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(adjacency(x, 1, 0.0), std::invalid_argument);
}

TEST_CASE("laplacian of the 3-path and the constant null vector") {
  Mat w(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  const auto b = laplacian(w);
  const double want[3][3] = {{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(b.laplacian(i, j) == doctest::Approx(want[i][j]));

  const Vec ones(3, 1.0);
  const Vec lv = matvec(b.laplacian, ones);
  for (double v : lv) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("normalized laplacian of the complete graph on 3 nodes") {
  Mat w(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) w(i, j) = 1.0;
  const auto b = laplacian(w);
  const Vec ev = sym_eigenvalues(b.normalized);
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(ev[1] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(ev[2] == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("laplacian validates its input") {
  Mat neg(2, 2);
  neg(0, 1) = neg(1, 0) = -0.5;
  CHECK_THROWS_AS(laplacian(neg), std::invalid_argument);

  Mat asym(2, 2);
  asym(0, 1) = 0.5;
  asym(1, 0) = 0.5 + 1e-9;
  CHECK_THROWS_AS(laplacian(asym), std::invalid_argument);

  Mat diag(2, 2);
  diag(0, 0) = 0.3;
  CHECK_THROWS_AS(laplacian(diag), std::invalid_argument);
}

TEST_CASE("isolated vertices get zero normalized rows") {
  Mat w(3, 3);
  w(0, 1) = w(1, 0) = 0.7;  // vertex 2 isolated
  const auto b = laplacian(w);
  for (int j = 0; j < 3; ++j) {
    CHECK(b.normalized(2, j) == 0.0);
    CHECK(b.normalized(j, 2) == 0.0);
  }
}

TEST_CASE("manifold energy equals the pairwise sum and is PSD") {
  Rng rng(9);

  // constant function on any graph has zero energy
  const Mat x0 = random_points(rng, 6, 2);
  const auto b0 = build_laplacian(x0, 2, 0.9);
  CHECK(manifold_energy(Vec(6, 3.25), b0.laplacian) == doctest::Approx(0.0).epsilon(1e-12));

  // single edge, f = (1, 0): energy 1
  Mat w(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK(manifold_energy(Vec{1.0, 0.0}, laplacian(w).laplacian) == doctest::Approx(1.0));

  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 4 + rng.below(8);
    const Mat x = random_points(rng, n, 2);
    const auto b = build_laplacian(x, 2, 0.4 + rng.uniform01());
    const Vec f = random_vec(rng, n);
    const double lhs = manifold_energy(f, b.laplacian);
    const double rhs = oracle::pairwise_energy(f, b.w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    double norm2f = 0.0;
    for (double v : f) norm2f += v * v;
    CHECK(lhs >= -1e-8 * norm2f);
  }
}

TEST_CASE("normalized laplacian spectrum lies in [0, 2]") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 5 + rng.below(15);
    const auto b = build_laplacian(random_points(rng, n, 3), 3, 0.5 + rng.uniform01());
    const Vec ev = sym_eigenvalues(b.normalized);
    CHECK(ev.front() >= -1e-8);
    CHECK(ev.back() <= 2.0 + 1e-8);
  }
}

TEST_CASE("adjacency commutes with row permutations") {
  Rng rng(15);
  const std::size_t n = 9;
  const Mat x = random_points(rng, n, 2);
  const Mat w = adjacency(x, 3, 0.8);

  std::vector<int> perm = rng.permutation(n);
  const Mat xp = take_rows(x, perm);
  const Mat wp = adjacency(xp, 3, 0.8);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      CHECK(wp(i, j) == doctest::Approx(w(perm[i], perm[j])).epsilon(1e-13));
}

TEST_CASE("unlabeled laplacian: edge sizes, consistency, brute-force restriction") {
  Rng rng(19);
  const Mat x = random_points(rng, 10, 2);

  CHECK(unlabeled_laplacian(x, {}, 2, 1.0).rows() == 0);

  const Mat single = unlabeled_laplacian(x, {4}, 2, 1.0);
  CHECK(single.rows() == 1);
  CHECK(single(0, 0) == 0.0);

  std::vector<int> all(10);
  for (int i = 0; i < 10; ++i) all[i] = i;
  const Mat lu_all = unlabeled_laplacian(x, all, 3, 0.8);
  const Mat l_ref = build_laplacian(x, 3, 0.8).laplacian;
  CHECK(lu_all == l_ref);

  const std::vector<int> subset{1, 3, 4, 8, 9};
  const Mat lu = unlabeled_laplacian(x, subset, 2, 0.8);
  const Mat w_or = oracle::knn_adjacency(take_rows(x, subset), 2, 0.8);
  Vec deg(subset.size(), 0.0);
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = 0; j < subset.size(); ++j) deg[i] += w_or(i, j);
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = 0; j < subset.size(); ++j) {
      const double want = (i == j ? deg[i] : 0.0) - w_or(i, j);
      CHECK(lu(i, j) == doctest::Approx(want).epsilon(1e-13));
    }
}
