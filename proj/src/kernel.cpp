#include "mvlap/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvlap/rng.hpp"
#include "mvlap/simd.hpp"

namespace mvlap {

void KernelSpec::validate() const {
  if (kind == KernelKind::gaussian && !(width > 0.0))
    throw std::invalid_argument("kernel: gaussian width must be > 0");
}

double kernel_eval(const KernelSpec& spec, const double* x, const double* z, std::size_t dim) {
  const auto& ops = simd::active();
  switch (spec.kind) {
    case KernelKind::linear: {
      const double base = ops.dot(x, z, dim);
      return spec.augment_bias ? base + 1.0 : base;
    }
    case KernelKind::gaussian: {
      spec.validate();
      return std::exp(-ops.sqdist(x, z, dim) / (2.0 * spec.width * spec.width));
    }
  }
  throw std::invalid_argument("kernel: unknown kind");
}

double kernel_eval(const KernelSpec& spec, const Vec& x, const Vec& z) {
  if (x.size() != z.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  return kernel_eval(spec, x.data(), z.data(), x.size());
}

Mat gram(const KernelSpec& spec, const Mat& x, const Mat& z) {
  if (x.cols() != z.cols()) throw std::invalid_argument("gram: column counts differ");
  spec.validate();
  Mat k(x.rows(), z.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < z.rows(); ++j)
      k(i, j) = kernel_eval(spec, x.row(i), z.row(j), x.cols());
  return k;
}

double median_width(const Mat& x) {
  const std::size_t n = x.rows();
  if (n < 2) throw std::invalid_argument("median_width: need at least 2 rows");
  const auto& ops = simd::active();

  Vec d2;
  constexpr std::size_t kExhaustiveLimit = 2000;
  if (n <= kExhaustiveLimit) {
    d2.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        d2.push_back(ops.sqdist(x.row(i), x.row(j), x.cols()));
  } else {
    const std::size_t samples = kExhaustiveLimit * (kExhaustiveLimit - 1) / 2;
    Rng rng(0x6d65646977ULL);  // fixed internal seed keeps the heuristic pure
    d2.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) {
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      d2.push_back(ops.sqdist(x.row(i), x.row(j), x.cols()));
    }
  }

  const std::size_t m = d2.size();
  auto mid = d2.begin() + m / 2;
  std::nth_element(d2.begin(), mid, d2.end());
  double med2 = *mid;
  if (m % 2 == 0) {
    auto lo = std::max_element(d2.begin(), mid);
    med2 = 0.5 * (std::sqrt(*lo) + std::sqrt(*mid));
    return med2;
  }
  return std::sqrt(med2);
}

Mat labeled_rows(const Mat& k, std::size_t l) {
  if (l > k.rows()) throw std::invalid_argument("labeled_rows: l exceeds row count");
  Mat r(l, k.cols());
  for (std::size_t i = 0; i < l; ++i) std::copy(k.row(i), k.row(i) + k.cols(), r.row(i));
  return r;
}

Mat unlabeled_rows(const Mat& k, std::size_t l) {
  if (l > k.rows()) throw std::invalid_argument("unlabeled_rows: l exceeds row count");
  const std::size_t u = k.rows() - l;
  Mat r(u, k.cols());
  for (std::size_t i = 0; i < u; ++i) std::copy(k.row(l + i), k.row(l + i) + k.cols(), r.row(i));
  return r;
}

}  // namespace mvlap
