#pragma once

#include <string>
#include <vector>

#include "mvlap/dataset.hpp"
#include "mvlap/graph.hpp"
#include "mvlap/kernel.hpp"
#include "mvlap/qp.hpp"

namespace mvlap {

struct GraphConfig {
  int k = 6;
  double sigma = 0.0;  // <= 0 means: use median pairwise distance
};

struct TrainConfig {
  KernelSpec kernel1;
  KernelSpec kernel2;
  GraphConfig graph1;
  GraphConfig graph2;
  Hyperparams hp;
  SolveOptions solve;
};

struct Diagnostics {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  double kkt_residual = 0.0;
  double slack_sum = 0.0;
  double jitter = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Immutable result of a training run: the representer coefficients over the
// l+u training points (labeled first) together with everything prediction
// needs. Single-view models duplicate their view into both slots, which makes
// f2 = f1 and keeps one prediction path for every method.
struct TrainedModel {
  Vec alpha1;
  Vec alpha2;
  Mat train_view1;
  Mat train_view2;
  KernelSpec kernel1;
  KernelSpec kernel2;
  Hyperparams hp;
  std::vector<int> y_labeled;
  std::size_t l = 0;
  std::size_t u = 0;
  Diagnostics diag;
};

// Split-dependent matrices that do not depend on the hyperparameters. A grid
// search builds this once and trains many models from it.
struct PreparedProblem {
  Mat x1, x2;            // l+u training rows per view, labeled first
  std::vector<int> y;    // labels of the first l rows
  std::size_t l = 0, u = 0;
  KernelSpec kernel1, kernel2;  // widths resolved
  Mat k1, k2;            // Gram matrices
  Mat k1l, k2l;          // labeled rows
  Mat lnorm1, lnorm2;    // normalized Laplacians (empty when skipped)
  Mat p1, p2;            // K L K per view (empty until needed)
  Mat c11, c22, c12;     // K K products (empty until needed)

  void ensure_laplacian(int view, const GraphConfig& g);
  void ensure_manifold_product(int view);
  void ensure_agreement_products();
};

PreparedProblem prepare_problem(const MultiViewDataset& ds, const SplitDataset& split,
                                const KernelSpec& kernel1, const KernelSpec& kernel2);

// Full MvLapSVM training: Gram matrices over labeled+unlabeled points,
// normalized per-view Laplacians, the dual QP, and coefficient recovery.
// Validation/test rows never enter any of it.
TrainedModel train(const MultiViewDataset& ds, const SplitDataset& split, const TrainConfig& cfg);
TrainedModel train_from_prepared(PreparedProblem& prep, const GraphConfig& g1,
                                 const GraphConfig& g2, const Hyperparams& hp,
                                 const SolveOptions& opts = {});

// LapSVM: single view with the multi-view coupling absent (gamma3 = 0). The
// other view's contents are never read.
TrainedModel train_lapsvm(const MultiViewDataset& ds, const SplitDataset& split, int view,
                          const TrainConfig& cfg);
TrainedModel train_lapsvm_from_prepared(PreparedProblem& prep, int view, const GraphConfig& g,
                                        const Hyperparams& hp, const SolveOptions& opts = {});
// co-SVM: both views, manifold term off (gamma2 = 0). Same code path as train.
TrainedModel train_cosvm(const MultiViewDataset& ds, const SplitDataset& split,
                         const TrainConfig& cfg);

double predict_view(const TrainedModel& m, const Vec& x, int view);
Vec predict_view(const TrainedModel& m, const Mat& x, int view);
double predict_combined(const TrainedModel& m, const Vec& x1, const Vec& x2);
Vec predict_combined(const TrainedModel& m, const Mat& x1, const Mat& x2);

// sgn with sgn(0) := +1.
int classify(double score);

void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace mvlap
