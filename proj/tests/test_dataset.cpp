#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

#include "mvlap/dataset.hpp"

using namespace mvlap;

namespace {

struct TempDir {
  std::string base;
  TempDir() {
    char tmpl[] = "/tmp/mvlap_test_XXXXXX";
    base = mkdtemp(tmpl);
  }
  std::string path(const char* name) const { return base + "/" + name; }
};

bool same_dataset(const MultiViewDataset& a, const MultiViewDataset& b) {
  return a.view1 == b.view1 && a.view2 == b.view2 && a.labels == b.labels;
}

}  // namespace

TEST_CASE("generator produces balanced, row-aligned data") {
  const auto ds = gen_two_moons_two_lines(200, 0.1, 7);
  REQUIRE(ds.n() == 400);
  REQUIRE(ds.view1.rows() == 400);
  REQUIRE(ds.view2.rows() == 400);
  CHECK(ds.view1.cols() == 2);
  CHECK(ds.view2.cols() == 2);
  int pos = 0, neg = 0;
  for (int y : ds.labels) (y > 0 ? pos : neg)++;
  CHECK(pos == 200);
  CHECK(neg == 200);
}

TEST_CASE("zero noise puts each class exactly on its line in view 2") {
  const auto ds = gen_two_moons_two_lines(200, 0.0, 3);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const double want = ds.labels[i] > 0 ? 1.0 : -1.0;
    CHECK(ds.view2(i, 1) == want);
    CHECK(ds.view2(i, 0) >= -1.0);
    CHECK(ds.view2(i, 0) <= 1.0);
  }
  // and on its unit arc in view 1
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const double cx = ds.labels[i] > 0 ? 0.0 : 1.0;
    const double cy = ds.labels[i] > 0 ? 0.0 : -0.5;
    const double r2 = (ds.view1(i, 0) - cx) * (ds.view1(i, 0) - cx) +
                      (ds.view1(i, 1) - cy) * (ds.view1(i, 1) - cy);
    CHECK(r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ds.view1(i, 1) >= cy - 1e-12);  // upper half arcs
  }
}

TEST_CASE("generation is a pure function of its arguments") {
  const auto a = gen_two_moons_two_lines(200, 0.1, 12345);
  const auto b = gen_two_moons_two_lines(200, 0.1, 12345);
  CHECK(same_dataset(a, b));
  const auto c = gen_two_moons_two_lines(200, 0.1, 12346);
  CHECK_FALSE(same_dataset(a, c));
}

TEST_CASE("generator rejects bad arguments") {
  CHECK_THROWS_AS(gen_two_moons_two_lines(0, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_two_moons_two_lines(10, -0.5, 1), std::invalid_argument);
}

TEST_CASE("make_split returns disjoint lists of the requested sizes") {
  const auto ds = gen_two_moons_two_lines(205, 0.1, 5);
  const SplitSpec spec{10, 200, 100, 100, 99};
  const auto split = make_split(ds, spec);
  CHECK(split.labeled_idx.size() == 10);
  CHECK(split.unlabeled_idx.size() == 200);
  CHECK(split.validation_idx.size() == 100);
  CHECK(split.test_idx.size() == 100);

  std::set<int> seen;
  for (const auto* list : {&split.labeled_idx, &split.unlabeled_idx, &split.validation_idx,
                           &split.test_idx})
    for (int i : *list) {
      CHECK(seen.insert(i).second);  // pairwise disjoint
      CHECK(i >= 0);
      CHECK(i < int(ds.n()));
    }

  bool pos = false, neg = false;
  for (int i : split.labeled_idx) (ds.labels[i] > 0 ? pos : neg) = true;
  CHECK(pos);
  CHECK(neg);
}

TEST_CASE("make_split is deterministic in the seed") {
  const auto ds = gen_two_moons_two_lines(50, 0.1, 5);
  const SplitSpec spec{4, 20, 10, 10, 7};
  const auto a = make_split(ds, spec);
  const auto b = make_split(ds, spec);
  CHECK(a.labeled_idx == b.labeled_idx);
  CHECK(a.unlabeled_idx == b.unlabeled_idx);
  CHECK(a.validation_idx == b.validation_idx);
  CHECK(a.test_idx == b.test_idx);
}

TEST_CASE("make_split rejects oversized requests") {
  const auto ds = gen_two_moons_two_lines(50, 0.1, 5);
  CHECK_THROWS_AS(make_split(ds, SplitSpec{10, 200, 100, 100, 1}), std::invalid_argument);
}

TEST_CASE("make_split reports an impossible labeled draw") {
  // one-class dataset: both classes can never appear among the labeled rows
  MultiViewDataset ds;
  ds.view1 = Mat(6, 1);
  ds.view2 = Mat(6, 1);
  ds.labels.assign(6, +1);
  CHECK_THROWS_WITH_AS(make_split(ds, SplitSpec{2, 2, 1, 1, 3}),
                       doctest::Contains("missed a class"), std::runtime_error);
}

TEST_CASE("dataset CSV round-trip is exact") {
  TempDir tmp;
  const auto ds = gen_two_moons_two_lines(40, 0.25, 11);
  save_dataset(ds, tmp.path("v1.csv"), tmp.path("v2.csv"), tmp.path("y.csv"));
  const auto back = load_dataset(tmp.path("v1.csv"), tmp.path("v2.csv"), tmp.path("y.csv"));
  CHECK(same_dataset(ds, back));
}

TEST_CASE("loader reports bad labels, malformed fields and row mismatches") {
  TempDir tmp;
  const auto ds = gen_two_moons_two_lines(5, 0.1, 2);
  save_dataset(ds, tmp.path("v1.csv"), tmp.path("v2.csv"), tmp.path("y.csv"));

  {
    std::ofstream bad(tmp.path("bad_labels.csv"));
    bad << "1\n-1\n2\n1\n-1\n1\n-1\n1\n-1\n1\n";
  }
  CHECK_THROWS_WITH_AS(load_dataset(tmp.path("v1.csv"), tmp.path("v2.csv"),
                                    tmp.path("bad_labels.csv")),
                       doctest::Contains("row 3"), std::runtime_error);

  {
    std::ofstream bad(tmp.path("bad_field.csv"));
    bad << "0.5,0.25\n0.125,zebra\n";
  }
  CHECK_THROWS_WITH_AS(load_dataset(tmp.path("bad_field.csv"), tmp.path("bad_field.csv"),
                                    tmp.path("y.csv")),
                       doctest::Contains("row 2"), std::runtime_error);

  {
    std::ofstream shorter(tmp.path("v2_short.csv"));
    for (int i = 0; i < 9; ++i) shorter << "0,0\n";
  }
  CHECK_THROWS_WITH_AS(load_dataset(tmp.path("v1.csv"), tmp.path("v2_short.csv"),
                                    tmp.path("y.csv")),
                       doctest::Contains("mismatch"), std::runtime_error);
}

TEST_CASE("within-class view-2 draws stay distinct under the random pairing") {
  const auto ds = gen_two_moons_two_lines(100, 0.0, 21);
  std::set<double> xs_pos, xs_neg;
  for (std::size_t i = 0; i < ds.n(); ++i)
    (ds.labels[i] > 0 ? xs_pos : xs_neg).insert(ds.view2(i, 0));
  CHECK(xs_pos.size() == 100);
  CHECK(xs_neg.size() == 100);
}
