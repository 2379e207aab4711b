// Independent reference implementations used only by tests. Everything here
// recomputes results by a different route than the library (naive loops,
// exhaustive enumeration, Gauss-Jordan inverses) so the two sides can
// cross-check each other.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mvlap/linalg.hpp"
#include "mvlap/qp.hpp"

namespace oracle {

using mvlap::Mat;
using mvlap::Vec;

// (1/2) sum_ij W_ij (f_i - f_j)^2, straight from the pairwise definition.
inline double pairwise_energy(const Vec& f, const Mat& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) s += w(i, j) * (f[i] - f[j]) * (f[i] - f[j]);
  return 0.5 * s;
}

// Brute-force symmetric kNN adjacency by full sorting, no shared code with
// the library's nth_element path.
inline Mat knn_adjacency(const Mat& x, int k, double sigma) {
  const std::size_t n = x.rows();
  Mat w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double diff = x(i, c) - x(j, c);
        s += diff * diff;
      }
      d.emplace_back(s, j);
    }
    std::sort(d.begin(), d.end());
    for (int t = 0; t < k; ++t) {
      const auto [dist2, j] = d[t];
      const double v = std::exp(-dist2 / (2.0 * sigma * sigma));
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

// The three quadratic terms of the primal objective, recomputed term by term
// from the raw matrices.
inline double objective_quadratic_terms(const Vec& a1, const Vec& a2, const Mat& k1,
                                        const Mat& k2, const Mat& l1, const Mat& l2,
                                        const mvlap::Hyperparams& hp) {
  const std::size_t n = k1.rows();
  auto mv = [n](const Mat& m, const Vec& v) {
    Vec r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i] += m(i, j) * v[j];
    return r;
  };
  auto dotv = [](const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  const Vec f1 = mv(k1, a1), f2 = mv(k2, a2);
  double obj = hp.gamma1 * (dotv(a1, f1) + dotv(a2, f2));
  obj += hp.gamma2 * (dotv(f1, mv(l1, f1)) + dotv(f2, mv(l2, f2)));
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d += (f1[i] - f2[i]) * (f1[i] - f2[i]);
  obj += hp.gamma3 * d;
  return obj;
}

// Gauss-Jordan inverse with partial pivoting; the dense-inverse route the
// complexity report is checked against.
inline Mat gj_inverse(Mat a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("gj_inverse: not square");
  Mat inv = Mat::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) throw std::runtime_error("gj_inverse: singular");
    if (piv != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    const double p = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

// Standard soft-margin SVM (no offset) dual solved by exhaustive grid:
//   max W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij,  0 <= a_i <= C.
// Returns the best grid point. steps = subdivisions per axis.
struct GridSvm {
  std::vector<double> a;
  double value = -1e300;
};

inline GridSvm svm_dual_grid(const Mat& kll, const std::vector<int>& y, double c_box,
                             std::size_t steps) {
  const std::size_t l = y.size();
  Mat q(l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) q(i, j) = double(y[i]) * double(y[j]) * kll(i, j);

  GridSvm best;
  std::vector<std::size_t> idx(l, 0);
  std::vector<double> a(l, 0.0);
  const double h = c_box / double(steps);
  while (true) {
    for (std::size_t i = 0; i < l; ++i) a[i] = double(idx[i]) * h;
    double w = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      w += a[i];
      double row = 0.0;
      for (std::size_t j = 0; j < l; ++j) row += q(i, j) * a[j];
      w -= 0.5 * a[i] * row;
    }
    if (w > best.value) {
      best.value = w;
      best.a = a;
    }
    std::size_t d = 0;
    while (d < l && ++idx[d] > steps) idx[d++] = 0;
    if (d == l) break;
  }
  return best;
}

}  // namespace oracle
