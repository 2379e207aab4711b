#pragma once

#include <memory>
#include <vector>

#include "mvlap/linalg.hpp"

namespace mvlap {

// Regularization coefficients with the 1/(l+u)^2 and 1/(l+u) scalings already
// absorbed into gamma2 and gamma3.
struct Hyperparams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;

  void validate() const;
};

// Quadratic form over the stacked expansion coefficients (alpha1; alpha2):
//
//   (a1;a2)^T Q (a1;a2) = gamma1 (a1'K1a1 + a2'K2a2)
//                       + gamma2 (a1'K1L1K1a1 + a2'K2L2K2a2)
//                       + gamma3 |K1a1 - K2a2|^2
//
// jitter is what the factorization added to the diagonal; the factorization
// itself is cached so dual solve and coefficient recovery share it.
struct QuadraticForm {
  Mat q;
  std::size_t n = 0;       // points per view; q is 2n x 2n (n x n single-view)
  std::size_t views = 2;
  double jitter = 0.0;

  const Cholesky& factor();

 private:
  std::shared_ptr<Cholesky> cached_;
};

struct SolveOptions {
  double tol = 1e-8;        // 2-norm of the projected gradient
  long max_iter = 50000;
  bool record_trace = false;  // keep per-iteration dual values (tests)
  // Coefficient on the hinge loss relative to the standard 1/(2l): scaling it
  // together with all three gammas leaves the minimizing alphas unchanged.
  // It only moves the multiplier box, which becomes [0, loss_scale/(2l)].
  double loss_scale = 1.0;
};

struct DualSolution {
  Vec lambda1;
  Vec lambda2;              // empty for single-view problems
  double dual_value = 0.0;
  long iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
  double jitter = 0.0;      // audit: diagonal shift used by the factorization
  bool degenerate = false;  // Q needed escalated jitter; solution depends on it
  Vec trace;                // dual value per iteration when record_trace is set
};

QuadraticForm assemble(const Mat& k1, const Mat& k2, const Mat& l1, const Mat& l2,
                       const Hyperparams& hp);
// Same assembly from precomputed products (grid searches reuse them):
// p_v = K_v L_v K_v, c11 = K1 K1, c22 = K2 K2, c12 = K1 K2.
QuadraticForm assemble_from_products(const Mat& k1, const Mat& k2, const Mat& p1, const Mat& p2,
                                     const Mat& c11, const Mat& c22, const Mat& c12,
                                     const Hyperparams& hp);
// Single-view form gamma1 K + gamma2 KLK (no multi-view coupling).
QuadraticForm assemble_single(const Mat& k, const Mat& p, const Hyperparams& hp);

// Maximizes the Lagrangian dual
//
//   g(lambda) = sum(lambda) - (1/4) c(lambda)^T Q^{-1} c(lambda),
//   c(lambda) = (K1l' diag(y) lambda1 ; K2l' diag(y) lambda2),
//
// over the box 0 <= lambda <= 1/(2l), by projected gradient ascent with
// Barzilai-Borwein steps, a monotone backtracking safeguard and a fixed
// 1/Lipschitz fallback step. K1l/K2l are the labeled rows of the Gram
// matrices, y the +/-1 labels.
DualSolution solve_dual(QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
                        const std::vector<int>& y, const SolveOptions& opts = {});
DualSolution solve_dual_single(QuadraticForm& qf, const Mat& kl, const std::vector<int>& y,
                               const SolveOptions& opts = {});

// Stationarity: 2 Q (a1;a2) = (K1l' diag(y) lambda1 ; K2l' diag(y) lambda2),
// solved with the cached factorization.
std::pair<Vec, Vec> recover_alphas(QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
                                   const std::vector<int>& y, const DualSolution& sol);
Vec recover_alpha_single(QuadraticForm& qf, const Mat& kl, const std::vector<int>& y,
                         const DualSolution& sol);

// Primal objective F0: mean hinge slack plus the three regularization terms,
// with slacks xi_v^i = max(0, 1 - y_i (K_v alpha_v)_i).
double primal_objective(const Vec& alpha1, const Vec& alpha2, const Mat& k1, const Mat& k2,
                        const Mat& l1, const Mat& l2, const std::vector<int>& y, std::size_t l,
                        const Hyperparams& hp);
double primal_objective_single(const Vec& alpha, const Mat& k, const Mat& lap,
                               const std::vector<int>& y, std::size_t l, const Hyperparams& hp);

// Dual objective and analytic gradient at an arbitrary multiplier point,
// evaluated through fresh factorized solves (certification helpers for the
// gradient and duality checks; lambda is the stacked (lambda1; lambda2)).
double dual_objective(QuadraticForm& qf, const Mat& k1l, const Mat& k2l,
                      const std::vector<int>& y, const Vec& lambda);
Vec dual_gradient(QuadraticForm& qf, const Mat& k1l, const Mat& k2l, const std::vector<int>& y,
                  const Vec& lambda);

}  // namespace mvlap
