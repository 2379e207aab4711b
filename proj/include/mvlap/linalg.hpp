#pragma once

#include <cstddef>
#include <vector>

namespace mvlap {

using Vec = std::vector<double>;

// Dense row-major matrix. Rows are contiguous so the simd kernels can stream
// over them.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  double* row(std::size_t i) { return a_.data() + i * cols_; }
  const double* row(std::size_t i) const { return a_.data() + i * cols_; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);

Mat transpose(const Mat& a);
Mat matmul(const Mat& a, const Mat& b);
Vec matvec(const Mat& a, const Vec& x);

// x^T A y (A square, dim(x) = dim(y) = dim(A))
double quad_form(const Vec& x, const Mat& a, const Vec& y);

double trace(const Mat& a);
void symmetrize(Mat& a);        // a <- (a + a^T)/2
void add_scaled(Mat& a, double s, const Mat& b);  // a += s*b
// a[row0.., col0..] += s*b
void add_scaled_block(Mat& a, std::size_t row0, std::size_t col0, double s, const Mat& b);
bool all_finite(const Mat& a);

Mat take_rows(const Mat& a, const std::vector<int>& idx);

// Cholesky factorization of a symmetric matrix with the shared jitter
// escalation policy: factor A + jitter*I with jitter starting at
// 1e-10*trace(A)/n, multiplied by 10 on failure, capped at 1e-4*trace(A)/n.
// A zero-trace A falls back to an absolute scale of 1. Throws
// std::runtime_error if the cap is reached without a successful
// factorization.
struct Cholesky {
  Mat lower;      // L with A + jitter*I = L L^T
  Mat upper;      // L^T, kept so back-substitution streams over rows
  double jitter = 0.0;
  bool escalated = false;  // jitter had to grow beyond its starting value

  Vec solve(const Vec& b) const;
  // Solves for each row of bt (i.e. each column of B = bt^T); returns the
  // solutions as rows again.
  Mat solve_rows(const Mat& bt) const;
  double log_det() const;
};

Cholesky cholesky_jittered(const Mat& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending order.
Vec sym_eigenvalues(Mat a);

}  // namespace mvlap
