#include "mvlap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvlap/simd.hpp"

namespace mvlap {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return simd::active().dot(a.data(), b.data(), a.size());
}

double norm2(const Vec& a) { return std::sqrt(simd::active().dot(a.data(), a.data(), a.size())); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  const auto& ops = simd::active();
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) ops.axpy(aik, b.row(k), ci, b.cols());
    }
  }
  return c;
}

Vec matvec(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  const auto& ops = simd::active();
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = ops.dot(a.row(i), x.data(), a.cols());
  return y;
}

double quad_form(const Vec& x, const Mat& a, const Vec& y) {
  if (a.rows() != x.size() || a.cols() != y.size())
    throw std::invalid_argument("quad_form: dimension mismatch");
  const auto& ops = simd::active();
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += x[i] * ops.dot(a.row(i), y.data(), a.cols());
  return s;
}

double trace(const Mat& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

void symmetrize(Mat& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = m;
      a(j, i) = m;
    }
}

void add_scaled(Mat& a, double s, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add_scaled: shape mismatch");
  simd::active().axpy(s, b.data(), a.data(), a.rows() * a.cols());
}

void add_scaled_block(Mat& a, std::size_t row0, std::size_t col0, double s, const Mat& b) {
  if (row0 + b.rows() > a.rows() || col0 + b.cols() > a.cols())
    throw std::invalid_argument("add_scaled_block: block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    simd::active().axpy(s, b.row(i), a.row(row0 + i) + col0, b.cols());
}

bool all_finite(const Mat& a) {
  const double* p = a.data();
  for (std::size_t i = 0, n = a.rows() * a.cols(); i < n; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

Mat take_rows(const Mat& a, const std::vector<int>& idx) {
  Mat r(idx.size(), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int src = idx[i];
    if (src < 0 || static_cast<std::size_t>(src) >= a.rows())
      throw std::invalid_argument("take_rows: index out of range");
    std::copy(a.row(src), a.row(src) + a.cols(), r.row(i));
  }
  return r;
}

namespace {

// Plain left-looking Cholesky; returns false on a nonpositive or nonfinite
// pivot.
bool try_cholesky(const Mat& a, double jitter, Mat& lower) {
  const std::size_t n = a.rows();
  const auto& ops = simd::active();
  lower = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j) - ops.dot(lower.row(i), lower.row(j), j);
      if (i == j) {
        s += jitter;
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        lower(i, i) = std::sqrt(s);
      } else {
        lower(i, j) = s / lower(j, j);
      }
    }
  }
  return true;
}

}  // namespace

Cholesky cholesky_jittered(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
  if (!all_finite(a)) throw std::invalid_argument("cholesky: nonfinite entry");
  const std::size_t n = a.rows();
  Cholesky f;
  if (n == 0) return f;

  double scale = trace(a) / static_cast<double>(n);
  if (!(scale > 0.0)) scale = 1.0;  // zero or negative trace: absolute fallback
  const double start = 1e-10 * scale;
  const double cap = 1e-4 * scale;

  for (double jitter = start; jitter <= cap * (1.0 + 1e-15); jitter *= 10.0) {
    if (try_cholesky(a, jitter, f.lower)) {
      f.jitter = jitter;
      f.escalated = jitter > start;
      f.upper = transpose(f.lower);
      return f;
    }
  }
  throw std::runtime_error("cholesky: factorization failed after jitter escalation (cap " +
                           std::to_string(cap) + ")");
}

Vec Cholesky::solve(const Vec& b) const {
  const std::size_t n = lower.rows();
  if (b.size() != n) throw std::invalid_argument("cholesky solve: dimension mismatch");
  const auto& ops = simd::active();
  Vec x(b);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = (x[i] - ops.dot(lower.row(i), x.data(), i)) / lower(i, i);
  for (std::size_t ii = n; ii-- > 0;) {
    const double* ui = upper.row(ii);
    x[ii] = (x[ii] - ops.dot(ui + ii + 1, x.data() + ii + 1, n - ii - 1)) / ui[ii];
  }
  return x;
}

Mat Cholesky::solve_rows(const Mat& bt) const {
  Mat xt(bt.rows(), bt.cols());
  Vec col(bt.cols());
  for (std::size_t r = 0; r < bt.rows(); ++r) {
    std::copy(bt.row(r), bt.row(r) + bt.cols(), col.begin());
    Vec sol = solve(col);
    std::copy(sol.begin(), sol.end(), xt.row(r));
  }
  return xt;
}

double Cholesky::log_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lower.rows(); ++i) s += std::log(lower(i, i));
  return 2.0 * s;
}

Vec sym_eigenvalues(Mat a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigenvalues: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return {};

  double fro2 = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) fro2 += a.data()[i] * a.data()[i];

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off <= 1e-28 * fro2) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace mvlap
