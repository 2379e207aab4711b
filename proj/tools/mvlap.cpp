// mvlap: multi-view Laplacian SVM command line.
//
// Subcommands: gen, train, predict, complexity, experiment. Every option can
// also come from a flat key=value config file via --config; command-line
// flags override config values.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mvlap/dataset.hpp"
#include "mvlap/experiment.hpp"
#include "mvlap/graph.hpp"
#include "mvlap/model.hpp"
#include "mvlap/simd.hpp"
#include "mvlap/theory.hpp"

namespace {

using namespace mvlap;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("empty value list: '" + csv + "'");
  return out;
}

KernelSpec make_kernel(const std::string& kind, double width, bool bias) {
  KernelSpec k;
  if (kind == "gaussian")
    k.kind = KernelKind::gaussian;
  else if (kind == "linear")
    k.kind = KernelKind::linear;
  else
    throw CLI::ValidationError("kernel must be 'gaussian' or 'linear', got '" + kind + "'");
  k.width = width;
  k.augment_bias = bias;
  return k;
}

// Rows with a +/-1 label are the labeled set, rows with 0 the unlabeled set.
SplitDataset split_by_labels(const MultiViewDataset& ds) {
  SplitDataset split;
  for (std::size_t i = 0; i < ds.n(); ++i)
    (ds.labels[i] != 0 ? split.labeled_idx : split.unlabeled_idx).push_back(int(i));
  return split;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

struct DataArgs {
  std::string view1, view2, labels;
  std::size_t n_per_class = 205;
  double noise = 0.35;
};

struct KernelArgs {
  std::string kind1 = "gaussian", kind2 = "linear";
  double width1 = 0.0, width2 = 0.0;  // 0: median heuristic (gaussian only)
  bool no_bias = false;
  int k1 = 6, k2 = 6;
  double sigma1 = 0.0, sigma2 = 0.0;
};

void add_kernel_flags(CLI::App* cmd, KernelArgs& ka) {
  cmd->add_option("--kernel1", ka.kind1, "view-1 kernel: gaussian|linear")
      ->default_val(ka.kind1);
  cmd->add_option("--kernel2", ka.kind2, "view-2 kernel: gaussian|linear")
      ->default_val(ka.kind2);
  cmd->add_option("--width1", ka.width1,
                  "gaussian width for view 1 (0 = median pairwise distance)");
  cmd->add_option("--width2", ka.width2,
                  "gaussian width for view 2 (0 = median pairwise distance)");
  cmd->add_flag("--no-bias", ka.no_bias, "disable the constant-coordinate bias augmentation");
  cmd->add_option("--knn1", ka.k1, "view-1 graph neighbours")->default_val(6);
  cmd->add_option("--knn2", ka.k2, "view-2 graph neighbours")->default_val(6);
  cmd->add_option("--sigma1", ka.sigma1, "view-1 adjacency width (0 = median heuristic)");
  cmd->add_option("--sigma2", ka.sigma2, "view-2 adjacency width (0 = median heuristic)");
}

void fill_kernels(const KernelArgs& ka, KernelSpec& k1, KernelSpec& k2, GraphConfig& g1,
                  GraphConfig& g2) {
  k1 = make_kernel(ka.kind1, ka.width1, !ka.no_bias);
  k2 = make_kernel(ka.kind2, ka.width2, !ka.no_bias);
  g1 = GraphConfig{ka.k1, ka.sigma1};
  g2 = GraphConfig{ka.k2, ka.sigma2};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view Laplacian SVM toolkit"};
  app.set_config("--config", "", "flat key=value config file; flags override it");
  app.require_subcommand(1);

  std::string simd_backend;
  app.add_option("--simd", simd_backend, "force a compute backend: scalar|avx2|neon");

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate the two-moons-two-lines dataset as CSV");
  DataArgs gen_args;
  std::uint64_t gen_seed = 1;
  gen->add_option("--n-per-class", gen_args.n_per_class, "examples per class")->default_val(205);
  gen->add_option("--noise", gen_args.noise, "Gaussian noise std-dev")->default_val(0.35);
  gen->add_option("--seed", gen_seed, "RNG seed")->default_val(1);
  gen->add_option("--view1", gen_args.view1, "output CSV for the moons view")->required();
  gen->add_option("--view2", gen_args.view2, "output CSV for the lines view")->required();
  gen->add_option("--labels", gen_args.labels, "output CSV for the labels")->required();

  // ---- train ---------------------------------------------------------------
  auto* train_cmd = app.add_subcommand(
      "train", "train one model on CSV data (label 0 marks unlabeled rows)");
  DataArgs train_data;
  KernelArgs train_kernels;
  std::string train_method = "mvlapsvm", model_out;
  double tg1 = 1.0, tg2 = 1.0, tg3 = 1.0, train_tol = 1e-8;
  long train_iters = 50000;
  train_cmd->add_option("--view1", train_data.view1, "view-1 CSV")->required();
  train_cmd->add_option("--view2", train_data.view2, "view-2 CSV")->required();
  train_cmd->add_option("--labels", train_data.labels, "labels CSV")->required();
  train_cmd->add_option("--method", train_method, "mvlapsvm|lapsvm_v1|lapsvm_v2|cosvm")
      ->default_val("mvlapsvm");
  train_cmd->add_option("--gamma1", tg1, "norm regularization")->default_val(1.0);
  train_cmd->add_option("--gamma2", tg2, "manifold regularization")->default_val(1.0);
  train_cmd->add_option("--gamma3", tg3, "multi-view regularization")->default_val(1.0);
  train_cmd->add_option("--tol", train_tol, "solver tolerance")->default_val(1e-8);
  train_cmd->add_option("--max-iter", train_iters, "solver iteration cap")->default_val(50000);
  add_kernel_flags(train_cmd, train_kernels);
  train_cmd->add_option("--out", model_out, "model file to write")->required();

  // ---- predict ---------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "score CSV rows with a trained model");
  std::string model_in, pred_view1, pred_view2, pred_kind = "combined", pred_out;
  predict_cmd->add_option("--model", model_in, "model file")->required();
  predict_cmd->add_option("--view1", pred_view1, "view-1 CSV");
  predict_cmd->add_option("--view2", pred_view2, "view-2 CSV");
  predict_cmd->add_option("--predictor", pred_kind, "combined|view1|view2")
      ->default_val("combined");
  predict_cmd->add_option("--out", pred_out, "output file (default stdout)");

  // ---- complexity ------------------------------------------------------------
  auto* cx = app.add_subcommand(
      "complexity", "Rademacher complexity sandwich, MC estimate and generalization bound");
  DataArgs cx_data;
  KernelArgs cx_kernels;
  bool cx_synth = false, cx_tsv = false;
  std::uint64_t cx_seed = 1;
  std::size_t cx_l = 10, cx_u = 200, cx_nv = 0, cx_nt = 0, cx_draws = 2000;
  double cxg1 = 1.0, cxg2 = 1.0, cxg3 = 1.0, cx_delta = 0.05, cx_noise = 0.35;
  std::size_t cx_npc = 205;
  cx->add_option("--view1", cx_data.view1, "view-1 CSV");
  cx->add_option("--view2", cx_data.view2, "view-2 CSV");
  cx->add_option("--labels", cx_data.labels, "labels CSV");
  cx->add_flag("--synthetic", cx_synth, "use generated two-moons-two-lines data");
  cx->add_option("--n-per-class", cx_npc)->default_val(205);
  cx->add_option("--noise", cx_noise)->default_val(0.35);
  cx->add_option("--labeled", cx_l, "labeled count (synthetic split)")->default_val(10);
  cx->add_option("--unlabeled", cx_u, "unlabeled count (synthetic split)")->default_val(200);
  cx->add_option("--validation", cx_nv)->default_val(0);
  cx->add_option("--test", cx_nt)->default_val(0);
  cx->add_option("--seed", cx_seed)->default_val(1);
  cx->add_option("--gamma1", cxg1)->default_val(1.0);
  cx->add_option("--gamma2", cxg2)->default_val(1.0);
  cx->add_option("--gamma3", cxg3)->default_val(1.0);
  cx->add_option("--draws", cx_draws, "Monte-Carlo sign draws")->default_val(2000);
  cx->add_option("--delta", cx_delta, "bound confidence parameter")->default_val(0.05);
  cx->add_flag("--tsv", cx_tsv, "emit key<TAB>value lines");
  add_kernel_flags(cx, cx_kernels);

  // ---- experiment ---------------------------------------------------------
  auto* ex = app.add_subcommand("experiment",
                                "grid search + repetition protocol, reports T/U accuracies");
  DataArgs ex_data;
  KernelArgs ex_kernels;
  std::string ex_methods = "mvlapsvm,lapsvm_v1,lapsvm_v2,cosvm";
  std::string ex_g1 = "1e-10,1e-6,1e-4,1e-2,1,10,100";
  std::string ex_g2 = ex_g1, ex_g3 = ex_g1, ex_format = "text", ex_out;
  std::uint64_t ex_seed = 1;
  std::size_t ex_l = 10, ex_u = 200, ex_nv = 100, ex_nt = 100, ex_reps = 10, ex_draws = 2000;
  double ex_delta = 0.05, ex_tol = 1e-8;
  bool ex_complexity = false;
  long ex_iters = 50000;
  ex->add_option("--view1", ex_data.view1, "view-1 CSV (omit for synthetic data)");
  ex->add_option("--view2", ex_data.view2, "view-2 CSV");
  ex->add_option("--labels", ex_data.labels, "labels CSV");
  ex->add_option("--n-per-class", ex_data.n_per_class, "synthetic examples per class")
      ->default_val(205);
  ex->add_option("--noise", ex_data.noise, "synthetic noise std-dev")->default_val(0.35);
  ex->add_option("--labeled", ex_l)->default_val(10);
  ex->add_option("--unlabeled", ex_u)->default_val(200);
  ex->add_option("--validation", ex_nv)->default_val(100);
  ex->add_option("--test", ex_nt)->default_val(100);
  ex->add_option("--repetitions", ex_reps)->default_val(10);
  ex->add_option("--seed", ex_seed)->default_val(1);
  ex->add_option("--delta", ex_delta)->default_val(0.05);
  ex->add_option("--methods", ex_methods, "comma list of mvlapsvm|lapsvm_v1|lapsvm_v2|cosvm");
  ex->add_option("--grid-gamma1", ex_g1, "comma list of gamma1 candidates");
  ex->add_option("--grid-gamma2", ex_g2, "comma list of gamma2 candidates");
  ex->add_option("--grid-gamma3", ex_g3, "comma list of gamma3 candidates");
  ex->add_option("--tol", ex_tol)->default_val(1e-8);
  ex->add_option("--max-iter", ex_iters)->default_val(50000);
  ex->add_flag("--with-complexity", ex_complexity,
               "attach complexity/bound reports (two-view methods)");
  ex->add_option("--mc-draws", ex_draws)->default_val(2000);
  ex->add_option("--format", ex_format, "text|tsv")->default_val("text");
  ex->add_option("--out", ex_out, "output file (default stdout)");
  add_kernel_flags(ex, ex_kernels);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!simd_backend.empty() && !mvlap::simd::select(simd_backend))
      throw std::runtime_error("simd backend '" + simd_backend + "' is not available here");

    if (gen->parsed()) {
      const auto ds = gen_two_moons_two_lines(gen_args.n_per_class, gen_args.noise, gen_seed);
      save_dataset(ds, gen_args.view1, gen_args.view2, gen_args.labels);
      std::cout << "wrote " << ds.n() << " examples\n";
      return 0;
    }

    if (train_cmd->parsed()) {
      const auto ds = load_dataset(train_data.view1, train_data.view2, train_data.labels);
      const SplitDataset split = split_by_labels(ds);
      TrainConfig cfg;
      fill_kernels(train_kernels, cfg.kernel1, cfg.kernel2, cfg.graph1, cfg.graph2);
      cfg.hp = {tg1, tg2, tg3};
      cfg.solve.tol = train_tol;
      cfg.solve.max_iter = train_iters;

      TrainedModel model;
      const Method method = parse_method(train_method);
      switch (method) {
        case Method::mvlapsvm: model = train(ds, split, cfg); break;
        case Method::cosvm: model = train_cosvm(ds, split, cfg); break;
        case Method::lapsvm_v1: model = train_lapsvm(ds, split, 1, cfg); break;
        case Method::lapsvm_v2: model = train_lapsvm(ds, split, 2, cfg); break;
      }
      save_model(model, model_out);
      std::cout << "trained " << method_name(method) << " on " << model.l << " labeled + "
                << model.u << " unlabeled points\n"
                << "primal " << fmt(model.diag.primal_value) << ", dual "
                << fmt(model.diag.dual_value) << ", gap " << fmt(model.diag.duality_gap)
                << ", iterations " << model.diag.iterations
                << (model.diag.converged ? "" : " (iteration cap hit)") << "\n";
      return 0;
    }

    if (predict_cmd->parsed()) {
      const TrainedModel model = load_model(model_in);
      Vec scores;
      if (pred_kind == "view1") {
        if (pred_view1.empty()) throw std::runtime_error("predict: --view1 required");
        scores = predict_view(model, load_csv_matrix(pred_view1), 1);
      } else if (pred_kind == "view2") {
        if (pred_view2.empty()) throw std::runtime_error("predict: --view2 required");
        scores = predict_view(model, load_csv_matrix(pred_view2), 2);
      } else if (pred_kind == "combined") {
        if (pred_view1.empty() || pred_view2.empty())
          throw std::runtime_error("predict: --view1 and --view2 required");
        scores = predict_combined(model, load_csv_matrix(pred_view1),
                                  load_csv_matrix(pred_view2));
      } else {
        throw std::runtime_error("predict: unknown predictor '" + pred_kind + "'");
      }
      std::ostringstream out;
      for (double s : scores) out << fmt(s) << '\t' << (classify(s) > 0 ? "+1" : "-1") << '\n';
      write_output(pred_out, out.str());
      return 0;
    }

    if (cx->parsed()) {
      MultiViewDataset ds;
      SplitDataset split;
      if (cx_synth) {
        ds = gen_two_moons_two_lines(cx_npc, cx_noise, cx_seed);
        split = make_split(ds, {cx_l, cx_u, cx_nv, cx_nt, cx_seed});
      } else {
        if (cx_data.view1.empty())
          throw std::runtime_error("complexity: pass --synthetic or CSV paths");
        ds = load_dataset(cx_data.view1, cx_data.view2, cx_data.labels);
        split = split_by_labels(ds);
      }
      TrainConfig cfg;
      fill_kernels(cx_kernels, cfg.kernel1, cfg.kernel2, cfg.graph1, cfg.graph2);
      cfg.hp = {cxg1, cxg2, cxg3};
      const TrainedModel model = train(ds, split, cfg);

      PreparedProblem prep = prepare_problem(ds, split, cfg.kernel1, cfg.kernel2);
      std::vector<int> unl(prep.u);
      for (std::size_t i = 0; i < prep.u; ++i) unl[i] = int(prep.l + i);
      const double s1 = cfg.graph1.sigma > 0 ? cfg.graph1.sigma : median_width(prep.x1);
      const double s2 = cfg.graph2.sigma > 0 ? cfg.graph2.sigma : median_width(prep.x2);
      const Mat l1u = unlabeled_laplacian(prep.x1, unl, cfg.graph1.k, s1);
      const Mat l2u = unlabeled_laplacian(prep.x2, unl, cfg.graph2.k, s2);

      const auto rep = complexity_u(prep.k1, prep.k2, l1u, l2u, cfg.hp, prep.l, prep.u);
      const auto mc = mc_rademacher(prep.k1, prep.k2, l1u, l2u, cfg.hp, prep.l, prep.u,
                                    cx_draws, cx_seed);
      const auto bound = generalization_bound(model, mc.estimate, cx_delta);

      const char sep = cx_tsv ? '\t' : ' ';
      std::ostringstream out;
      auto kv = [&](const char* key, double v) {
        out << key << (cx_tsv ? "" : ":") << sep << fmt(v) << '\n';
      };
      kv("trace_S", rep.trace_s);
      kv("trace_correction", rep.trace_correction);
      kv("U2", rep.u_squared);
      kv("U", rep.u_value);
      kv("rademacher_lower", rep.lower);
      kv("rademacher_upper", rep.upper);
      kv("mc_estimate", mc.estimate);
      kv("mc_std_error", mc.std_error);
      kv("slack_mean", bound.slack_mean);
      kv("complexity_term", bound.complexity_term);
      kv("confidence_term", bound.confidence_term);
      kv("delta", bound.delta);
      kv("bound_total", bound.total);
      write_output("", out.str());
      return 0;
    }

    if (ex->parsed()) {
      ExperimentConfig cfg;
      cfg.synthetic = ex_data.view1.empty();
      if (!cfg.synthetic) {
        cfg.view1_path = ex_data.view1;
        cfg.view2_path = ex_data.view2;
        cfg.labels_path = ex_data.labels;
      }
      cfg.n_per_class = ex_data.n_per_class;
      cfg.noise = ex_data.noise;
      cfg.split = {ex_l, ex_u, ex_nv, ex_nt, 0};
      fill_kernels(ex_kernels, cfg.kernel1, cfg.kernel2, cfg.graph1, cfg.graph2);
      cfg.grid1 = parse_list(ex_g1);
      cfg.grid2 = parse_list(ex_g2);
      cfg.grid3 = parse_list(ex_g3);
      cfg.methods.clear();
      std::stringstream ms(ex_methods);
      std::string tok;
      while (std::getline(ms, tok, ','))
        if (!tok.empty()) cfg.methods.push_back(parse_method(tok));
      cfg.repetitions = ex_reps;
      cfg.seed = ex_seed;
      cfg.delta = ex_delta;
      cfg.solve.tol = ex_tol;
      cfg.solve.max_iter = ex_iters;
      cfg.with_complexity = ex_complexity;
      cfg.mc_draws = ex_draws;

      const ExperimentReport rep = run_experiment(cfg);
      ReportFormat format;
      if (ex_format == "text")
        format = ReportFormat::text;
      else if (ex_format == "tsv")
        format = ReportFormat::tsv;
      else
        throw std::runtime_error("experiment: unknown format '" + ex_format + "'");
      write_output(ex_out, report_emit(rep, format));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
