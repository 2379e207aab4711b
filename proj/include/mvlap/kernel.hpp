#pragma once

#include <cstddef>

#include "mvlap/linalg.hpp"

namespace mvlap {

enum class KernelKind { linear, gaussian };

// Bias terms are folded into the classifiers by augmenting every example with
// a constant 1 coordinate, so augment_bias adds +1 to the linear kernel and
// leaves the gaussian kernel unchanged (the constant coordinate cancels in
// the difference). There is no separate offset variable anywhere.
struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  double width = 1.0;  // gaussian only
  bool augment_bias = false;

  void validate() const;
};

double kernel_eval(const KernelSpec& spec, const double* x, const double* z, std::size_t dim);
double kernel_eval(const KernelSpec& spec, const Vec& x, const Vec& z);

// Entry (i,j) = k(X_i, Z_j). Symmetric when called with X as both arguments.
Mat gram(const KernelSpec& spec, const Mat& x, const Mat& z);

// Median of pairwise Euclidean distances, the default width heuristic.
// Exhaustive for up to 2000 rows, fixed-seed pair subsampling above that.
// Returns 0 for fully duplicated rows; callers must treat that as degenerate.
double median_width(const Mat& x);

// Gram matrices of the two views over the l+u training points, labeled rows
// first. That ordering is what every labeled/unlabeled block slice assumes.
struct GramPair {
  Mat k1;
  Mat k2;
  std::size_t l = 0;
  std::size_t u = 0;
};

// First l rows / last u rows of an (l+u)x(l+u) Gram matrix.
Mat labeled_rows(const Mat& k, std::size_t l);
Mat unlabeled_rows(const Mat& k, std::size_t l);

}  // namespace mvlap
