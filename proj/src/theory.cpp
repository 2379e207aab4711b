#include "mvlap/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "mvlap/rng.hpp"
#include "mvlap/simd.hpp"

namespace mvlap {

namespace {

void check_inputs(const Mat& k, const Mat& lu, std::size_t l, std::size_t u, const char* what) {
  const std::size_t n = l + u;
  if (k.rows() != n || k.cols() != n)
    throw std::invalid_argument(std::string(what) + ": Gram matrix must be (l+u)x(l+u)");
  if (lu.rows() != u || lu.cols() != u)
    throw std::invalid_argument(std::string(what) + ": unlabeled Laplacian must be u x u");
}

// A_v = gamma1 K + gamma2 Ku' Lu Ku over all l+u points.
Mat inner_matrix(const Mat& k, const Mat& lu, const Hyperparams& hp, std::size_t l) {
  Mat a(k.rows(), k.cols());
  add_scaled(a, hp.gamma1, k);
  if (hp.gamma2 != 0.0 && lu.rows() > 0) {
    const Mat ku = unlabeled_rows(k, l);
    add_scaled(a, hp.gamma2, matmul(transpose(ku), matmul(lu, ku)));
  }
  symmetrize(a);
  return a;
}

}  // namespace

ComplexityReport complexity_u(const Mat& k1, const Mat& k2, const Mat& l1u, const Mat& l2u,
                              const Hyperparams& hp, std::size_t l, std::size_t u) {
  hp.validate();
  check_inputs(k1, l1u, l, u, "complexity_u");
  check_inputs(k2, l2u, l, u, "complexity_u");
  if (l == 0) throw std::invalid_argument("complexity_u: l must be >= 1");

  ComplexityReport rep;
  rep.gamma = hp;
  rep.l = l;
  rep.u = u;

  const auto& ops = simd::active();
  // Per view: solve A_v Z = [K_vl' K_vu'] once, then read off the pieces of
  // S, Theta and J from the products.
  Mat s(l, l), theta(u, u), j(u, l);
  for (int view = 0; view < 2; ++view) {
    const Mat& k = view == 0 ? k1 : k2;
    const Mat& lu = view == 0 ? l1u : l2u;
    const Mat a = inner_matrix(k, lu, hp, l);
    const Cholesky fac = cholesky_jittered(a);
    (view == 0 ? rep.jitter1 : rep.jitter2) = fac.jitter;

    const Mat kl = labeled_rows(k, l);   // l x n, rows are columns of K_vl'
    const Mat ku = unlabeled_rows(k, l); // u x n
    const Mat zl = fac.solve_rows(kl);   // rows: A^{-1} K_vl' columns
    const Mat zu = fac.solve_rows(ku);

    const double sgn = view == 0 ? 1.0 : -1.0;
    for (std::size_t r = 0; r < l; ++r)
      for (std::size_t c = 0; c < l; ++c)
        s(r, c) += ops.dot(kl.row(r), zl.row(c), kl.cols());
    for (std::size_t r = 0; r < u; ++r)
      for (std::size_t c = 0; c < u; ++c)
        theta(r, c) += ops.dot(ku.row(r), zu.row(c), ku.cols());
    for (std::size_t r = 0; r < u; ++r)
      for (std::size_t c = 0; c < l; ++c)
        j(r, c) += sgn * ops.dot(ku.row(r), zl.row(c), ku.cols());
  }

  rep.trace_s = trace(s);

  if (hp.gamma3 != 0.0 && u > 0) {
    Mat core = Mat::identity(u);
    add_scaled(core, hp.gamma3, theta);
    symmetrize(core);
    const Cholesky fac = cholesky_jittered(core);
    const Mat jt = transpose(j);           // l x u, rows are columns of J
    const Mat zj = fac.solve_rows(jt);     // rows: (I + g3 Theta)^{-1} J columns
    double corr = 0.0;
    for (std::size_t c = 0; c < l; ++c) corr += ops.dot(jt.row(c), zj.row(c), u);
    rep.trace_correction = corr;
  }

  rep.u_squared = rep.trace_s - hp.gamma3 * rep.trace_correction;
  if (rep.u_squared < -1e-8)
    throw std::runtime_error("complexity_u: U^2 = " + std::to_string(rep.u_squared) +
                             " is negative beyond tolerance; inner matrices are too "
                             "ill-conditioned (jitters " + std::to_string(rep.jitter1) + ", " +
                             std::to_string(rep.jitter2) + ")");
  rep.u_value = std::sqrt(std::max(0.0, rep.u_squared));
  rep.upper = rep.u_value / static_cast<double>(l);
  rep.lower = rep.upper / std::sqrt(2.0);
  return rep;
}

McEstimate mc_rademacher(const Mat& k1, const Mat& k2, const Mat& l1u, const Mat& l2u,
                         const Hyperparams& hp, std::size_t l, std::size_t u,
                         std::size_t n_draws, std::uint64_t seed) {
  hp.validate();
  check_inputs(k1, l1u, l, u, "mc_rademacher");
  check_inputs(k2, l2u, l, u, "mc_rademacher");
  if (l == 0) throw std::invalid_argument("mc_rademacher: l must be >= 1");
  if (n_draws == 0) throw std::invalid_argument("mc_rademacher: n_draws must be >= 1");

  const std::size_t n = l + u;

  // Constraint ellipsoid over stacked expansion coefficients (beta1; beta2):
  // beta' M beta <= 1 with the norm, unlabeled-manifold and unlabeled
  // agreement terms of the function class.
  Mat m(2 * n, 2 * n);
  {
    const Mat a1 = inner_matrix(k1, l1u, hp, l);
    const Mat a2 = inner_matrix(k2, l2u, hp, l);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jj = 0; jj < n; ++jj) {
        m(i, jj) = a1(i, jj);
        m(n + i, n + jj) = a2(i, jj);
      }
    if (hp.gamma3 != 0.0 && u > 0) {
      const Mat k1u = unlabeled_rows(k1, l);
      const Mat k2u = unlabeled_rows(k2, l);
      add_scaled_block(m, 0, 0, hp.gamma3, matmul(transpose(k1u), k1u));
      add_scaled_block(m, n, n, hp.gamma3, matmul(transpose(k2u), k2u));
      const Mat cross = matmul(transpose(k1u), k2u);
      add_scaled_block(m, 0, n, -hp.gamma3, cross);
      add_scaled_block(m, n, 0, -hp.gamma3, transpose(cross));
    }
    symmetrize(m);
  }
  const Cholesky fac = cholesky_jittered(m);

  const Mat k1l = labeled_rows(k1, l);
  const Mat k2l = labeled_rows(k2, l);

  double sum = 0.0, sumsq = 0.0;
  Vec c(2 * n);
  const auto& ops = simd::active();
  for (std::size_t d = 0; d < n_draws; ++d) {
    Rng rng(derive_seed(seed, d));
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < l; ++i) {
      const double sigma = rng.raw() & 1 ? 1.0 : -1.0;
      const double w = sigma / static_cast<double>(l);
      ops.axpy(w, k1l.row(i), c.data(), n);
      ops.axpy(w, k2l.row(i), c.data() + n, n);
    }
    const Vec z = fac.solve(c);
    const double sup = std::sqrt(std::max(0.0, dot(c, z)));
    sum += sup;
    sumsq += sup * sup;
  }

  McEstimate est;
  est.draws = n_draws;
  est.estimate = sum / static_cast<double>(n_draws);
  if (n_draws > 1) {
    const double var =
        std::max(0.0, (sumsq - sum * sum / double(n_draws)) / double(n_draws - 1));
    est.std_error = std::sqrt(var / double(n_draws));
  }
  return est;
}

BoundReport generalization_bound(const TrainedModel& model, double r_hat, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("generalization_bound: delta must lie in (0,1)");
  const std::size_t l = model.l;
  if (l == 0) throw std::invalid_argument("generalization_bound: model has no labeled points");

  BoundReport rep;
  rep.delta = delta;
  rep.slack_mean = model.diag.slack_sum / (2.0 * static_cast<double>(l));
  rep.complexity_term = 2.0 * r_hat;
  rep.confidence_term = 3.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(l)));
  rep.total = rep.slack_mean + rep.complexity_term + rep.confidence_term;
  return rep;
}

}  // namespace mvlap
