#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvlap/linalg.hpp"

namespace mvlap {

// Two aligned feature views of the same examples. Row i of view1 and view2
// describes example i. Labels are +1/-1, or 0 for "unlabeled" in files; the
// split decides which labels are visible to training.
struct MultiViewDataset {
  Mat view1;
  Mat view2;
  std::vector<int> labels;

  std::size_t n() const { return labels.size(); }
  void validate() const;
};

struct SplitSpec {
  std::size_t n_labeled = 0;
  std::size_t n_unlabeled = 0;
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

// Pairwise-disjoint index lists into a MultiViewDataset. True labels at
// unlabeled_idx stay available for evaluation only.
struct SplitDataset {
  std::vector<int> labeled_idx;
  std::vector<int> unlabeled_idx;
  std::vector<int> validation_idx;
  std::vector<int> test_idx;
};

// Synthetic two-moons-two-lines data. View 1: two unit-radius half-circle
// arcs, the class -1 arc shifted by (1, -0.5). View 2: class +1 on the line
// y = +1 and class -1 on y = -1, x uniform on [-1, 1]. Isotropic Gaussian
// noise of the given std-dev is added per coordinate, and within each class
// the moon/line pairing is a uniformly random bijection.
MultiViewDataset gen_two_moons_two_lines(std::size_t n_per_class, double noise,
                                         std::uint64_t seed);

// Uniformly random disjoint index sets of the requested sizes. The labeled
// draw must contain both classes (rows labeled 0 cannot be drawn as labeled);
// the permutation is redrawn a bounded number of times before giving up.
SplitDataset make_split(const MultiViewDataset& ds, const SplitSpec& spec);

// CSV persistence: one row per example, comma-separated decimals, no header;
// the labels file is a single column of {+1,-1,0}. Values are written with 17
// significant digits so save/load round-trips exactly.
MultiViewDataset load_dataset(const std::string& view1_path, const std::string& view2_path,
                              const std::string& labels_path);
void save_dataset(const MultiViewDataset& ds, const std::string& view1_path,
                  const std::string& view2_path, const std::string& labels_path);

Mat load_csv_matrix(const std::string& path);
void save_csv_matrix(const Mat& m, const std::string& path);

}  // namespace mvlap
