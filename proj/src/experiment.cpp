#include "mvlap/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mvlap/graph.hpp"

namespace mvlap {

std::string method_name(Method m) {
  switch (m) {
    case Method::mvlapsvm: return "mvlapsvm";
    case Method::lapsvm_v1: return "lapsvm_v1";
    case Method::lapsvm_v2: return "lapsvm_v2";
    case Method::cosvm: return "cosvm";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "mvlapsvm") return Method::mvlapsvm;
  if (name == "lapsvm_v1") return Method::lapsvm_v1;
  if (name == "lapsvm_v2") return Method::lapsvm_v2;
  if (name == "cosvm") return Method::cosvm;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string predictor_name(Predictor p) {
  switch (p) {
    case Predictor::combined: return "combined";
    case Predictor::view1: return "view1";
    case Predictor::view2: return "view2";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (grid1.empty() || grid2.empty() || grid3.empty())
    throw std::invalid_argument("experiment: hyperparameter grids must be non-empty");
  if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods selected");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("experiment: delta must lie in (0,1)");
}

double accuracy_percent(const Vec& scores, const std::vector<int>& truth) {
  if (scores.size() != truth.size())
    throw std::invalid_argument("accuracy: scores and labels disagree");
  std::size_t considered = 0, correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truth[i] == 0) continue;  // no ground truth for this row
    ++considered;
    if (classify(scores[i]) == truth[i]) ++correct;
  }
  if (considered == 0) throw std::runtime_error("accuracy: no ground-truth labels to score");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(considered);
}

namespace {

std::vector<int> labels_at(const MultiViewDataset& ds, const std::vector<int>& idx) {
  std::vector<int> y;
  y.reserve(idx.size());
  for (int i : idx) y.push_back(ds.labels[i]);
  return y;
}

// Validation-row kernel blocks against the training rows, shared by every
// grid point of a repetition.
struct EvalCache {
  Mat kv1, kv2;  // validation x train
  std::vector<int> yval;
};

EvalCache make_eval_cache(const MultiViewDataset& ds, const SplitDataset& split,
                          const PreparedProblem& prep) {
  EvalCache ec;
  const Mat xv1 = take_rows(ds.view1, split.validation_idx);
  const Mat xv2 = take_rows(ds.view2, split.validation_idx);
  ec.kv1 = gram(prep.kernel1, xv1, prep.x1);
  ec.kv2 = gram(prep.kernel2, xv2, prep.x2);
  ec.yval = labels_at(ds, split.validation_idx);
  return ec;
}

std::vector<Predictor> admissible_predictors(Method m) {
  switch (m) {
    case Method::lapsvm_v1: return {Predictor::view1};
    case Method::lapsvm_v2: return {Predictor::view2};
    default: return {Predictor::combined, Predictor::view1, Predictor::view2};
  }
}

Vec predictor_scores(Predictor p, const Vec& f1, const Vec& f2) {
  switch (p) {
    case Predictor::view1: return f1;
    case Predictor::view2: return f2;
    case Predictor::combined: {
      Vec g(f1.size());
      for (std::size_t i = 0; i < f1.size(); ++i) g[i] = 0.5 * (f1[i] + f2[i]);
      return g;
    }
  }
  throw std::logic_error("bad predictor");
}

// Unlabeled rows sit at positions l..l+u-1 of the prepared training matrices.
std::vector<int> consecutive_unlabeled(const PreparedProblem& prep) {
  std::vector<int> idx(prep.u);
  for (std::size_t i = 0; i < prep.u; ++i) idx[i] = static_cast<int>(prep.l + i);
  return idx;
}

double resolve_sigma_for(const Mat& x, const GraphConfig& g) {
  return g.sigma > 0.0 ? g.sigma : median_width(x);
}

std::vector<Hyperparams> method_grid(const ExperimentConfig& cfg, Method m) {
  std::vector<Hyperparams> grid;
  const std::vector<double> zero{0.0};
  const auto& g1 = cfg.grid1;
  const auto& g2 = (m == Method::cosvm) ? zero : cfg.grid2;
  const auto& g3 = (m == Method::lapsvm_v1 || m == Method::lapsvm_v2) ? zero : cfg.grid3;
  for (double a : g1)
    for (double b : g2)
      for (double c : g3) grid.push_back({a, b, c});
  return grid;
}

}  // namespace

GridSearchResult grid_search(const MultiViewDataset& ds, const SplitDataset& split,
                             const ExperimentConfig& cfg, Method method) {
  cfg.validate();
  PreparedProblem prep = prepare_problem(ds, split, cfg.kernel1, cfg.kernel2);
  const EvalCache ec = make_eval_cache(ds, split, prep);
  const std::vector<Hyperparams> grid = method_grid(cfg, method);
  const std::vector<Predictor> predictors = admissible_predictors(method);

  GridSearchResult best;
  bool have_best = false;
  std::size_t failures = 0;
  std::string first_failure;

  for (const Hyperparams& hp : grid) {
    TrainedModel model;
    try {
      switch (method) {
        case Method::mvlapsvm:
          model = train_from_prepared(prep, cfg.graph1, cfg.graph2, hp, cfg.solve);
          break;
        case Method::cosvm: {
          Hyperparams h = hp;
          h.gamma2 = 0.0;
          model = train_from_prepared(prep, cfg.graph1, cfg.graph2, h, cfg.solve);
          break;
        }
        case Method::lapsvm_v1:
          model = train_lapsvm_from_prepared(prep, 1, cfg.graph1, hp, cfg.solve);
          break;
        case Method::lapsvm_v2:
          model = train_lapsvm_from_prepared(prep, 2, cfg.graph2, hp, cfg.solve);
          break;
      }
    } catch (const std::exception& e) {
      ++failures;  // skip this grid point; the search fails only if all do
      if (first_failure.empty()) first_failure = e.what();
      continue;
    }

    // Scores of both view expansions on the validation rows. Single-view
    // models hold their view in both slots, so the right block is chosen by
    // the admissible predictor.
    const Vec f1 = matvec(method == Method::lapsvm_v2 ? ec.kv2 : ec.kv1, model.alpha1);
    const Vec f2 = matvec(method == Method::lapsvm_v1 ? ec.kv1 : ec.kv2, model.alpha2);

    for (Predictor p : predictors) {
      const double acc = accuracy_percent(predictor_scores(p, f1, f2), ec.yval);
      if (!have_best || acc > best.selection.val_accuracy) {
        best.selection = {model.hp, p, acc};
        best.model = model;
        have_best = true;
      }
    }
  }

  if (!have_best)
    throw std::runtime_error("grid_search(" + method_name(method) + "): all " +
                             std::to_string(failures) + " grid points failed; first error: " +
                             first_failure);
  return best;
}

namespace {

void summarize(MethodSummary& s) {
  const std::size_t n = s.reps.size();
  double tm = 0.0, um = 0.0;
  for (const auto& r : s.reps) {
    tm += r.t_accuracy;
    um += r.u_accuracy;
  }
  tm /= double(n);
  um /= double(n);
  double tv = 0.0, uv = 0.0;
  for (const auto& r : s.reps) {
    tv += (r.t_accuracy - tm) * (r.t_accuracy - tm);
    uv += (r.u_accuracy - um) * (r.u_accuracy - um);
  }
  s.t_mean = tm;
  s.t_std = std::sqrt(tv / double(n));
  s.u_mean = um;
  s.u_std = std::sqrt(uv / double(n));
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MultiViewDataset ds =
      cfg.synthetic ? gen_two_moons_two_lines(cfg.n_per_class, cfg.noise, cfg.seed)
                    : load_dataset(cfg.view1_path, cfg.view2_path, cfg.labels_path);

  ExperimentReport report;
  report.repetitions = cfg.repetitions;
  report.methods.resize(cfg.methods.size());
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) report.methods[m].method = cfg.methods[m];

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    SplitSpec spec = cfg.split;
    spec.seed = cfg.seed + rep;
    const SplitDataset split = make_split(ds, spec);

    const Mat xt1 = take_rows(ds.view1, split.test_idx);
    const Mat xt2 = take_rows(ds.view2, split.test_idx);
    const std::vector<int> ytest = labels_at(ds, split.test_idx);
    const std::vector<int> yunl = labels_at(ds, split.unlabeled_idx);

    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      const Method method = cfg.methods[m];
      GridSearchResult gs = grid_search(ds, split, cfg, method);
      const TrainedModel& model = gs.model;

      // Test scores through fresh kernel blocks; unlabeled training scores
      // through the expansion over the training rows themselves.
      const Vec ft1 = predict_view(model, method == Method::lapsvm_v2 ? xt2 : xt1, 1);
      const Vec ft2 = predict_view(model, method == Method::lapsvm_v1 ? xt1 : xt2, 2);
      const Vec ftrain1 = matvec(gram(model.kernel1, model.train_view1, model.train_view1),
                                 model.alpha1);
      const Vec ftrain2 = matvec(gram(model.kernel2, model.train_view2, model.train_view2),
                                 model.alpha2);
      Vec fu1(ftrain1.begin() + model.l, ftrain1.end());
      Vec fu2(ftrain2.begin() + model.l, ftrain2.end());

      RepetitionResult rr;
      rr.selection = gs.selection;
      rr.t_accuracy = accuracy_percent(predictor_scores(gs.selection.predictor, ft1, ft2), ytest);
      rr.u_accuracy = accuracy_percent(predictor_scores(gs.selection.predictor, fu1, fu2), yunl);

      if (cfg.with_complexity &&
          (method == Method::mvlapsvm || method == Method::cosvm)) {
        PreparedProblem prep = prepare_problem(ds, split, cfg.kernel1, cfg.kernel2);
        const Mat l1u = unlabeled_laplacian(prep.x1, consecutive_unlabeled(prep), cfg.graph1.k,
                                            resolve_sigma_for(prep.x1, cfg.graph1));
        const Mat l2u = unlabeled_laplacian(prep.x2, consecutive_unlabeled(prep), cfg.graph2.k,
                                            resolve_sigma_for(prep.x2, cfg.graph2));
        rr.complexity = complexity_u(prep.k1, prep.k2, l1u, l2u, model.hp, model.l, model.u);
        rr.mc = mc_rademacher(prep.k1, prep.k2, l1u, l2u, model.hp, model.l, model.u,
                              cfg.mc_draws, cfg.seed + rep);
        rr.bound = generalization_bound(model, rr.mc->estimate, cfg.delta);
      }

      report.methods[m].reps.push_back(std::move(rr));
    }
  }

  for (auto& s : report.methods) summarize(s);
  return report;
}

std::string report_emit(const ExperimentReport& rep, ReportFormat format) {
  char buf[256];
  std::ostringstream out;
  if (format == ReportFormat::tsv) {
    out << "method\tT_mean\tT_std\tU_mean\tU_std\n";
    for (const auto& s : rep.methods) {
      std::snprintf(buf, sizeof(buf), "%s\t%.2f\t%.2f\t%.2f\t%.2f\n",
                    method_name(s.method).c_str(), s.t_mean, s.t_std, s.u_mean, s.u_std);
      out << buf;
    }
    return out.str();
  }

  out << "Accuracies over " << rep.repetitions << " repetition(s), mean (std) %:\n";
  std::snprintf(buf, sizeof(buf), "  %-10s %16s %16s\n", "method", "T", "U");
  out << buf;
  for (const auto& s : rep.methods) {
    std::snprintf(buf, sizeof(buf), "  %-10s %9.2f (%.2f) %9.2f (%.2f)\n",
                  method_name(s.method).c_str(), s.t_mean, s.t_std, s.u_mean, s.u_std);
    out << buf;
  }
  out << "\nPer-repetition selections:\n";
  for (const auto& s : rep.methods) {
    for (std::size_t r = 0; r < s.reps.size(); ++r) {
      const auto& rr = s.reps[r];
      std::snprintf(buf, sizeof(buf),
                    "  %-10s rep %2zu: gamma=(%g, %g, %g) predictor=%-8s val=%.2f T=%.2f U=%.2f\n",
                    method_name(s.method).c_str(), r, rr.selection.hp.gamma1,
                    rr.selection.hp.gamma2, rr.selection.hp.gamma3,
                    predictor_name(rr.selection.predictor).c_str(), rr.selection.val_accuracy,
                    rr.t_accuracy, rr.u_accuracy);
      out << buf;
      if (rr.complexity) {
        std::snprintf(buf, sizeof(buf),
                      "  %-10s         U=%.6g sandwich=[%.6g, %.6g] mc=%.6g (+-%.2g) bound=%.6g\n",
                      "", rr.complexity->u_value, rr.complexity->lower, rr.complexity->upper,
                      rr.mc->estimate, rr.mc->std_error, rr.bound->total);
        out << buf;
      }
    }
  }
  return out.str();
}

}  // namespace mvlap
