#pragma once

#include <cstdint>

#include "mvlap/model.hpp"

namespace mvlap {

// Complexity sandwich U/(sqrt(2) l) <= R_hat(G) <= U/l with
//   U^2 = tr(S) - gamma3 tr(J^T (I + gamma3 Theta)^{-1} J),
//   S     = K1l A1^{-1} K1l' + K2l A2^{-1} K2l',
//   Theta = K1u A1^{-1} K1u' + K2u A2^{-1} K2u',
//   J     = K1u A1^{-1} K1l' - K2u A2^{-1} K2l',
//   A_v   = gamma1 K_v + gamma2 K_vu' L_vu K_vu,
// where L_vu are the unnormalized Laplacians over the unlabeled points only.
struct ComplexityReport {
  double trace_s = 0.0;
  double trace_correction = 0.0;  // tr(J^T (I + gamma3 Theta)^{-1} J)
  double u_squared = 0.0;
  double u_value = 0.0;
  double lower = 0.0;  // U / (sqrt(2) l)
  double upper = 0.0;  // U / l
  Hyperparams gamma;
  std::size_t l = 0;
  std::size_t u = 0;
  double jitter1 = 0.0;  // diagonal shifts used to factor A_1, A_2
  double jitter2 = 0.0;
};

ComplexityReport complexity_u(const Mat& k1, const Mat& k2, const Mat& l1u, const Mat& l2u,
                              const Hyperparams& hp, std::size_t l, std::size_t u);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

// Monte-Carlo estimate of the empirical Rademacher complexity of the averaged
// predictor class: for each sign draw the inner supremum over the constraint
// ellipsoid has the closed form sqrt(c' M^{-1} c), evaluated with a cached
// factorization. Per-draw RNG streams are derived from the seed, so the
// estimate does not depend on evaluation order.
McEstimate mc_rademacher(const Mat& k1, const Mat& k2, const Mat& l1u, const Mat& l2u,
                         const Hyperparams& hp, std::size_t l, std::size_t u,
                         std::size_t n_draws, std::uint64_t seed);

// The three summands of the generalization bound: mean hinge slack of the
// trained model, 2 R_hat, and 3 sqrt(ln(2/delta) / (2l)).
struct BoundReport {
  double slack_mean = 0.0;
  double complexity_term = 0.0;
  double confidence_term = 0.0;
  double delta = 0.0;
  double total = 0.0;
};

BoundReport generalization_bound(const TrainedModel& model, double r_hat, double delta);

}  // namespace mvlap
