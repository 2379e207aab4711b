#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvlap/model.hpp"
#include "mvlap/theory.hpp"

namespace mvlap {

enum class Method { mvlapsvm, lapsvm_v1, lapsvm_v2, cosvm };
std::string method_name(Method m);
Method parse_method(const std::string& name);

// Selection order on ties: combined, then view1, then view2.
enum class Predictor { combined, view1, view2 };
std::string predictor_name(Predictor p);

// Everything one experiment run needs. Each method searches the grid of its
// active coefficients (MvLapSVM all three, LapSVM gamma1/gamma2, co-SVM
// gamma1/gamma3) and picks hyperparameters plus a prediction function on the
// validation set.
struct ExperimentConfig {
  bool synthetic = true;
  std::size_t n_per_class = 205;
  double noise = 0.35;
  std::string view1_path, view2_path, labels_path;

  SplitSpec split{10, 200, 100, 100, 0};  // seed ignored; derived per repetition

  KernelSpec kernel1{KernelKind::gaussian, 0.0, true};  // width 0: median heuristic
  KernelSpec kernel2{KernelKind::linear, 1.0, true};
  GraphConfig graph1;
  GraphConfig graph2;

  std::vector<double> grid1{1e-10, 1e-6, 1e-4, 1e-2, 1.0, 10.0, 100.0};
  std::vector<double> grid2{1e-10, 1e-6, 1e-4, 1e-2, 1.0, 10.0, 100.0};
  std::vector<double> grid3{1e-10, 1e-6, 1e-4, 1e-2, 1.0, 10.0, 100.0};

  std::vector<Method> methods{Method::mvlapsvm, Method::lapsvm_v1, Method::lapsvm_v2,
                              Method::cosvm};
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  double delta = 0.05;
  SolveOptions solve;

  bool with_complexity = false;  // attach complexity/bound reports per repetition
  std::size_t mc_draws = 2000;

  void validate() const;
};

struct Selection {
  Hyperparams hp;
  Predictor predictor = Predictor::combined;
  double val_accuracy = 0.0;
};

struct GridSearchResult {
  Selection selection;
  TrainedModel model;
};

struct RepetitionResult {
  Selection selection;
  double t_accuracy = 0.0;  // test set, percent
  double u_accuracy = 0.0;  // unlabeled training set, percent
  std::optional<ComplexityReport> complexity;
  std::optional<McEstimate> mc;
  std::optional<BoundReport> bound;
};

struct MethodSummary {
  Method method = Method::mvlapsvm;
  std::vector<RepetitionResult> reps;
  double t_mean = 0.0, t_std = 0.0;
  double u_mean = 0.0, u_std = 0.0;
};

struct ExperimentReport {
  std::vector<MethodSummary> methods;
  std::size_t repetitions = 0;
};

// Trains one model per grid point of the method's active coefficients,
// scores the admissible prediction functions on the validation rows, and
// returns the winner. Ties fall to the combined predictor, then view1, then
// view2, then to the lexicographically smallest (gamma1, gamma2, gamma3).
GridSearchResult grid_search(const MultiViewDataset& ds, const SplitDataset& split,
                             const ExperimentConfig& cfg, Method method);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { text, tsv };
std::string report_emit(const ExperimentReport& rep, ReportFormat format);

double accuracy_percent(const Vec& scores, const std::vector<int>& truth);

}  // namespace mvlap
