#include "mvlap/qp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvlap/simd.hpp"

namespace mvlap {

void Hyperparams::validate() const {
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0) || !(gamma3 >= 0.0))
    throw std::invalid_argument("hyperparams: gammas must be nonnegative");
}

const Cholesky& QuadraticForm::factor() {
  if (!cached_) {
    cached_ = std::make_shared<Cholesky>(cholesky_jittered(q));
    jitter = cached_->jitter;
  }
  return *cached_;
}

namespace {

void check_square(const Mat& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument(std::string("assemble: ") + what + " has wrong shape");
}

void check_finite(const Mat& m, const char* what) {
  if (!all_finite(m))
    throw std::invalid_argument(std::string("assemble: ") + what + " contains NaN/Inf");
}

}  // namespace

QuadraticForm assemble_from_products(const Mat& k1, const Mat& k2, const Mat& p1, const Mat& p2,
                                     const Mat& c11, const Mat& c22, const Mat& c12,
                                     const Hyperparams& hp) {
  hp.validate();
  const std::size_t n = k1.rows();
  check_square(k1, n, "K1");
  check_square(k2, n, "K2");
  check_finite(k1, "K1");
  check_finite(k2, "K2");

  QuadraticForm qf;
  qf.n = n;
  qf.views = 2;
  qf.q = Mat(2 * n, 2 * n);

  auto add_block = [&](std::size_t bi, std::size_t bj, double s, const Mat& m) {
    if (s == 0.0) return;
    check_square(m, n, "product");
    check_finite(m, "product");
    for (std::size_t i = 0; i < n; ++i)
      simd::active().axpy(s, m.row(i), qf.q.row(bi * n + i) + bj * n, n);
  };

  add_block(0, 0, hp.gamma1, k1);
  add_block(1, 1, hp.gamma1, k2);
  add_block(0, 0, hp.gamma2, p1);
  add_block(1, 1, hp.gamma2, p2);
  add_block(0, 0, hp.gamma3, c11);
  add_block(1, 1, hp.gamma3, c22);
  add_block(0, 1, -hp.gamma3, c12);
  if (hp.gamma3 != 0.0) {
    // transpose of the cross block
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) qf.q(n + i, j) -= hp.gamma3 * c12(j, i);
  }

  symmetrize(qf.q);
  check_finite(qf.q, "Q");
  return qf;
}

QuadraticForm assemble(const Mat& k1, const Mat& k2, const Mat& l1, const Mat& l2,
                       const Hyperparams& hp) {
  hp.validate();
  const std::size_t n = k1.rows();
  check_square(k2, n, "K2");
  check_square(l1, n, "L1");
  check_square(l2, n, "L2");
  check_finite(l1, "L1");
  check_finite(l2, "L2");

  Mat p1, p2, c11, c22, c12;
  if (hp.gamma2 != 0.0) {
    p1 = matmul(matmul(k1, l1), k1);
    p2 = matmul(matmul(k2, l2), k2);
  } else {
    p1 = p2 = Mat(n, n);
  }
  if (hp.gamma3 != 0.0) {
    c11 = matmul(k1, k1);
    c22 = matmul(k2, k2);
    c12 = matmul(k1, k2);
  } else {
    c11 = c22 = c12 = Mat(n, n);
  }
  return assemble_from_products(k1, k2, p1, p2, c11, c22, c12, hp);
}

QuadraticForm assemble_single(const Mat& k, const Mat& p, const Hyperparams& hp) {
  hp.validate();
  const std::size_t n = k.rows();
  check_square(k, n, "K");
  check_finite(k, "K");

  QuadraticForm qf;
  qf.n = n;
  qf.views = 1;
  qf.q = Mat(n, n);
  add_scaled(qf.q, hp.gamma1, k);
  if (hp.gamma2 != 0.0) {
    check_square(p, n, "KLK");
    check_finite(p, "KLK");
    add_scaled(qf.q, hp.gamma2, p);
  }
  symmetrize(qf.q);
  return qf;
}

namespace {

// Rows of Bt are the columns of B, where c(lambda) = B lambda. Two-view: the
// first l rows carry y_i * K1l_i in the alpha1 slots, the next l rows carry
// y_i * K2l_i in the alpha2 slots.
Mat build_bt(const QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
             const std::vector<int>& y) {
  const std::size_t l = y.size();
  const std::size_t n = qf.n;
  for (int yi : y)
    if (yi != 1 && yi != -1) throw std::invalid_argument("solve_dual: labels must be +/-1");

  if (qf.views == 2) {
    if (k1l.rows() != l || k1l.cols() != n || k2l.rows() != l || k2l.cols() != n)
      throw std::invalid_argument("solve_dual: labeled Gram blocks have wrong shape");
    Mat bt(2 * l, 2 * n);
    for (std::size_t i = 0; i < l; ++i) {
      const double yi = y[i];
      for (std::size_t j = 0; j < n; ++j) {
        bt(i, j) = yi * k1l(i, j);
        bt(l + i, n + j) = yi * k2l(i, j);
      }
    }
    return bt;
  }
  if (k1l.rows() != l || k1l.cols() != n)
    throw std::invalid_argument("solve_dual: labeled Gram block has wrong shape");
  Mat bt(l, n);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < n; ++j) bt(i, j) = double(y[i]) * k1l(i, j);
  return bt;
}

// Componentwise first-order residual for max g over [0, hi]^m.
double kkt_residual_norm(const Vec& lambda, const Vec& grad, double hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    double r;
    if (lambda[i] <= 0.0)
      r = std::max(grad[i], 0.0);
    else if (lambda[i] >= hi)
      r = std::max(-grad[i], 0.0);
    else
      r = std::fabs(grad[i]);
    s += r * r;
  }
  return std::sqrt(s);
}

DualSolution solve_box_dual(QuadraticForm& qf, const Mat& bt, std::size_t l,
                            const SolveOptions& opts) {
  const Cholesky& fac = qf.factor();

  // H = B^T Q^{-1} B; the dual is g(lambda) = 1'lambda - (1/4) lambda'H lambda.
  const Mat xt = fac.solve_rows(bt);
  const std::size_t m = bt.rows();
  Mat h(m, m);
  const auto& ops = simd::active();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = ops.dot(bt.row(i), xt.row(j), bt.cols());
      h(i, j) = v;
      h(j, i) = v;
    }

  const double hi = opts.loss_scale / (2.0 * static_cast<double>(l));
  if (!(hi > 0.0)) throw std::invalid_argument("solve_dual: loss_scale must be > 0");

  auto grad_at = [&](const Vec& lam) {
    Vec g = matvec(h, lam);
    for (std::size_t i = 0; i < m; ++i) g[i] = 1.0 - 0.5 * g[i];
    return g;
  };
  auto value_at = [&](const Vec& lam) {
    double s = 0.0;
    for (double v : lam) s += v;
    return s - 0.25 * quad_form(lam, h, lam);
  };
  auto clamp_box = [&](Vec lam) {
    for (double& v : lam) v = std::clamp(v, 0.0, hi);
    return lam;
  };

  // Gershgorin upper bound on the gradient's Lipschitz constant; safe for the
  // fixed fallback step.
  double lip = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += std::fabs(h(i, j));
    lip = std::max(lip, 0.5 * row);
  }
  const double fixed_step = lip > 0.0 ? 1.0 / lip : 1.0;

  DualSolution sol;
  sol.jitter = qf.jitter;
  sol.degenerate = fac.escalated;

  Vec lam(m, 0.0);
  Vec grad = grad_at(lam);
  double val = value_at(lam);
  if (opts.record_trace) sol.trace.push_back(val);

  Vec prev_lam, prev_grad;
  long it = 0;
  for (; it < opts.max_iter; ++it) {
    sol.kkt_residual = kkt_residual_norm(lam, grad, hi);
    if (sol.kkt_residual <= opts.tol) {
      sol.converged = true;
      break;
    }

    // Barzilai-Borwein step when curvature information exists.
    double step = fixed_step;
    if (it > 0) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double si = lam[i] - prev_lam[i];
        ss += si * si;
        sy += si * (prev_grad[i] - grad[i]);
      }
      if (sy > 0.0 && ss > 0.0) step = std::clamp(ss / sy, 1e-8 * fixed_step, 1e8 * fixed_step);
    }

    // Backtrack until the dual value does not decrease. The 1/Lipschitz step
    // always satisfies this in exact arithmetic, so the halving loop only
    // trims floating-point edge cases near the optimum.
    prev_lam = lam;
    prev_grad = grad;
    Vec cand;
    double cand_val = 0.0;
    bool accepted = false;
    for (int back = 0; back < 80; ++back) {
      cand = prev_lam;
      for (std::size_t i = 0; i < m; ++i) cand[i] += step * prev_grad[i];
      cand = clamp_box(std::move(cand));
      cand_val = value_at(cand);
      if (cand_val >= val) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent representable; report the residual

    lam = std::move(cand);
    val = cand_val;
    grad = grad_at(lam);
    if (opts.record_trace) sol.trace.push_back(val);
  }
  sol.iterations = it;
  sol.dual_value = val;
  sol.kkt_residual = kkt_residual_norm(lam, grad, hi);
  if (sol.kkt_residual <= opts.tol) sol.converged = true;

  if (qf.views == 2) {
    sol.lambda1.assign(lam.begin(), lam.begin() + l);
    sol.lambda2.assign(lam.begin() + l, lam.end());
  } else {
    sol.lambda1 = std::move(lam);
  }
  return sol;
}

Vec stack_lambda(const DualSolution& sol) {
  Vec lam(sol.lambda1);
  lam.insert(lam.end(), sol.lambda2.begin(), sol.lambda2.end());
  return lam;
}

}  // namespace

DualSolution solve_dual(QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
                        const std::vector<int>& y, const SolveOptions& opts) {
  if (qf.views != 2) throw std::invalid_argument("solve_dual: two-view form expected");
  const Mat bt = build_bt(qf, k1l, k2l, y);
  return solve_box_dual(qf, bt, y.size(), opts);
}

DualSolution solve_dual_single(QuadraticForm& qf, const Mat& kl, const std::vector<int>& y,
                               const SolveOptions& opts) {
  if (qf.views != 1) throw std::invalid_argument("solve_dual_single: single-view form expected");
  const Mat bt = build_bt(qf, kl, kl, y);
  return solve_box_dual(qf, bt, y.size(), opts);
}

namespace {

Vec recover_stacked(QuadraticForm& qf, const Mat& bt, const Vec& lam) {
  Vec c(bt.cols(), 0.0);
  const auto& ops = simd::active();
  for (std::size_t i = 0; i < bt.rows(); ++i)
    if (lam[i] != 0.0) ops.axpy(lam[i], bt.row(i), c.data(), c.size());
  Vec alpha = qf.factor().solve(c);
  for (double& v : alpha) v *= 0.5;
  return alpha;
}

}  // namespace

std::pair<Vec, Vec> recover_alphas(QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
                                   const std::vector<int>& y, const DualSolution& sol) {
  if (qf.views != 2) throw std::invalid_argument("recover_alphas: two-view form expected");
  const Mat bt = build_bt(qf, k1l, k2l, y);
  const Vec alpha = recover_stacked(qf, bt, stack_lambda(sol));
  return {Vec(alpha.begin(), alpha.begin() + qf.n), Vec(alpha.begin() + qf.n, alpha.end())};
}

Vec recover_alpha_single(QuadraticForm& qf, const Mat& kl, const std::vector<int>& y,
                         const DualSolution& sol) {
  if (qf.views != 1) throw std::invalid_argument("recover_alpha_single: single-view form expected");
  const Mat bt = build_bt(qf, kl, kl, y);
  return recover_stacked(qf, bt, sol.lambda1);
}

double dual_objective(QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
                      const std::vector<int>& y, const Vec& lambda) {
  const Mat bt = build_bt(qf, k1l, k2l, y);
  if (lambda.size() != bt.rows()) throw std::invalid_argument("dual_objective: lambda size");
  Vec c(bt.cols(), 0.0);
  const auto& ops = simd::active();
  for (std::size_t i = 0; i < bt.rows(); ++i)
    if (lambda[i] != 0.0) ops.axpy(lambda[i], bt.row(i), c.data(), c.size());
  const Vec z = qf.factor().solve(c);
  double s = 0.0;
  for (double v : lambda) s += v;
  return s - 0.25 * dot(c, z);
}

Vec dual_gradient(QuadraticForm& qf, const Mat& k1l, const Mat& k2l, const std::vector<int>& y,
                  const Vec& lambda) {
  const Mat bt = build_bt(qf, k1l, k2l, y);
  if (lambda.size() != bt.rows()) throw std::invalid_argument("dual_gradient: lambda size");
  Vec c(bt.cols(), 0.0);
  const auto& ops = simd::active();
  for (std::size_t i = 0; i < bt.rows(); ++i)
    if (lambda[i] != 0.0) ops.axpy(lambda[i], bt.row(i), c.data(), c.size());
  const Vec z = qf.factor().solve(c);
  Vec g(bt.rows());
  for (std::size_t i = 0; i < bt.rows(); ++i)
    g[i] = 1.0 - 0.5 * ops.dot(bt.row(i), z.data(), z.size());
  return g;
}

namespace {

double hinge_slack_sum(const Vec& f, const std::vector<int>& y, std::size_t l) {
  double s = 0.0;
  for (std::size_t i = 0; i < l; ++i) s += std::max(0.0, 1.0 - double(y[i]) * f[i]);
  return s;
}

}  // namespace

double primal_objective(const Vec& alpha1, const Vec& alpha2, const Mat& k1, const Mat& k2,
                        const Mat& l1, const Mat& l2, const std::vector<int>& y, std::size_t l,
                        const Hyperparams& hp) {
  hp.validate();
  const std::size_t n = k1.rows();
  if (alpha1.size() != n || alpha2.size() != n || y.size() < l)
    throw std::invalid_argument("primal_objective: dimension mismatch");

  const Vec f1 = matvec(k1, alpha1);
  const Vec f2 = matvec(k2, alpha2);

  double obj = (hinge_slack_sum(f1, y, l) + hinge_slack_sum(f2, y, l)) /
               (2.0 * static_cast<double>(l));
  if (hp.gamma1 != 0.0) obj += hp.gamma1 * (dot(alpha1, f1) + dot(alpha2, f2));
  if (hp.gamma2 != 0.0) obj += hp.gamma2 * (quad_form(f1, l1, f1) + quad_form(f2, l2, f2));
  if (hp.gamma3 != 0.0) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double di = f1[i] - f2[i];
      d += di * di;
    }
    obj += hp.gamma3 * d;
  }
  return obj;
}

double primal_objective_single(const Vec& alpha, const Mat& k, const Mat& l,
                               const std::vector<int>& y, std::size_t lcount,
                               const Hyperparams& hp) {
  hp.validate();
  const Vec f = matvec(k, alpha);
  // Same 1/(2l) loss scaling as the two-view objective, so that gamma3 = 0
  // decouples the joint problem into two of these exactly.
  double obj = hinge_slack_sum(f, y, lcount) / (2.0 * static_cast<double>(lcount));
  if (hp.gamma1 != 0.0) obj += hp.gamma1 * dot(alpha, f);
  if (hp.gamma2 != 0.0) obj += hp.gamma2 * quad_form(f, l, f);
  return obj;
}

}  // namespace mvlap
