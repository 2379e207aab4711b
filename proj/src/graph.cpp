#include "mvlap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvlap/simd.hpp"

namespace mvlap {

Mat adjacency(const Mat& x, int k, double sigma) {
  const std::size_t n = x.rows();
  if (k < 1) throw std::invalid_argument("adjacency: k must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("adjacency: sigma must be > 0");
  if (static_cast<std::size_t>(k) >= n)
    throw std::invalid_argument("adjacency: k=" + std::to_string(k) + " needs more than " +
                                std::to_string(n) + " rows");

  const auto& ops = simd::active();
  Mat d2(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = ops.sqdist(x.row(i), x.row(j), x.cols());
      d2(i, j) = d;
      d2(j, i) = d;
    }
  }

  Mat w(n, n);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<std::pair<double, std::size_t>> order(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) order.emplace_back(d2(i, j), j);
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
    for (int t = 0; t < k; ++t) {
      const std::size_t j = order[t].second;
      const double val = std::exp(-d2(i, j) * inv);
      w(i, j) = val;
      w(j, i) = val;  // union symmetrization
    }
  }
  return w;
}

LaplacianBundle laplacian(Mat w) {
  const std::size_t n = w.rows();
  if (w.cols() != n) throw std::invalid_argument("laplacian: W not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (w(i, i) != 0.0)
      throw std::invalid_argument("laplacian: nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (w(i, j) < 0.0)
        throw std::invalid_argument("laplacian: negative entry at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      if (std::fabs(w(i, j) - w(j, i)) > 1e-12)
        throw std::invalid_argument("laplacian: asymmetry beyond 1e-12 at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
    }
  }

  LaplacianBundle b;
  b.degrees.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += w(i, j);
    b.degrees[i] = deg;
  }

  b.laplacian = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b.laplacian(i, j) = -w(i, j);
    b.laplacian(i, i) += b.degrees[i];
  }

  Vec inv_sqrt(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt[i] = b.degrees[i] > 0.0 ? 1.0 / std::sqrt(b.degrees[i]) : 0.0;
  b.normalized = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b.normalized(i, j) = inv_sqrt[i] * b.laplacian(i, j) * inv_sqrt[j];

  b.w = std::move(w);
  return b;
}

LaplacianBundle build_laplacian(const Mat& x, int k, double sigma) {
  LaplacianBundle b = laplacian(adjacency(x, k, sigma));
  b.sigma = sigma;
  b.k = k;
  return b;
}

double manifold_energy(const Vec& f, const Mat& l) {
  if (f.size() != l.rows() || l.rows() != l.cols())
    throw std::invalid_argument("manifold_energy: dimension mismatch");
  return quad_form(f, l, f);
}

Mat unlabeled_laplacian(const Mat& x, const std::vector<int>& unlabeled_idx, int k, double sigma) {
  const std::size_t u = unlabeled_idx.size();
  if (u == 0) return {};
  if (u == 1) return Mat(1, 1, 0.0);
  return laplacian(adjacency(take_rows(x, unlabeled_idx), k, sigma)).laplacian;
}

}  // namespace mvlap
