#pragma once

#include <vector>

#include "mvlap/linalg.hpp"

namespace mvlap {

// Adjacency, Laplacian L = V - W and normalized Laplacian V^{-1/2} L V^{-1/2}
// of one data graph. Vertices of degree zero keep zero rows/columns in the
// normalized Laplacian (0^{-1/2}*0 := 0).
struct LaplacianBundle {
  Mat w;
  Vec degrees;
  Mat laplacian;
  Mat normalized;
  double sigma = 0.0;
  int k = 0;
};

// Symmetric k-nearest-neighbour graph: W_ij = exp(-|x_i-x_j|^2 / (2 sigma^2))
// when j is among the k nearest neighbours of i or vice versa, else 0.
// Neighbour ties are broken by index so the result is deterministic.
Mat adjacency(const Mat& x, int k, double sigma);

LaplacianBundle laplacian(Mat w);
LaplacianBundle build_laplacian(const Mat& x, int k, double sigma);

// f^T L f; for the unnormalized Laplacian this equals the pairwise form
// (1/2) sum_ij W_ij (f_i - f_j)^2.
double manifold_energy(const Vec& f, const Mat& l);

// Unnormalized Laplacian of the graph over only the unlabeled rows (the
// L_{u} matrices of the complexity computation). A single unlabeled point
// has no edges, so u = 1 gives [[0]] and u = 0 an empty matrix.
Mat unlabeled_laplacian(const Mat& x, const std::vector<int>& unlabeled_idx, int k, double sigma);

}  // namespace mvlap
