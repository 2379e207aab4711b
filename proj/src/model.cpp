#include "mvlap/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvlap {

namespace {

KernelSpec resolve_kernel(KernelSpec spec, const Mat& x) {
  if (spec.kind == KernelKind::gaussian && spec.width <= 0.0) {
    const double med = median_width(x);
    if (!(med > 0.0))
      throw std::runtime_error("train: degenerate inputs, median pairwise distance is 0; "
                               "set the kernel width explicitly");
    spec.width = med;
  }
  return spec;
}

double resolve_sigma(const GraphConfig& g, const Mat& x) {
  if (g.sigma > 0.0) return g.sigma;
  const double med = median_width(x);
  if (!(med > 0.0))
    throw std::runtime_error("train: degenerate inputs, median pairwise distance is 0; "
                             "set the graph sigma explicitly");
  return med;
}

std::vector<int> train_order(const SplitDataset& split) {
  std::vector<int> order(split.labeled_idx);
  order.insert(order.end(), split.unlabeled_idx.begin(), split.unlabeled_idx.end());
  return order;
}

}  // namespace

PreparedProblem prepare_problem(const MultiViewDataset& ds, const SplitDataset& split,
                                const KernelSpec& kernel1, const KernelSpec& kernel2) {
  ds.validate();
  const std::size_t l = split.labeled_idx.size();
  const std::size_t u = split.unlabeled_idx.size();
  if (l == 0) throw std::invalid_argument("train: no labeled points");

  PreparedProblem prep;
  prep.l = l;
  prep.u = u;
  const std::vector<int> order = train_order(split);
  prep.x1 = take_rows(ds.view1, order);
  prep.x2 = take_rows(ds.view2, order);
  prep.y.reserve(l);
  for (int idx : split.labeled_idx) {
    const int y = ds.labels[idx];
    if (y != 1 && y != -1)
      throw std::invalid_argument("train: labeled row " + std::to_string(idx) +
                                  " has no +/-1 label");
    prep.y.push_back(y);
  }

  prep.kernel1 = resolve_kernel(kernel1, prep.x1);
  prep.kernel2 = resolve_kernel(kernel2, prep.x2);
  prep.k1 = gram(prep.kernel1, prep.x1, prep.x1);
  prep.k2 = gram(prep.kernel2, prep.x2, prep.x2);
  prep.k1l = labeled_rows(prep.k1, l);
  prep.k2l = labeled_rows(prep.k2, l);
  return prep;
}

void PreparedProblem::ensure_laplacian(int view, const GraphConfig& g) {
  Mat& lnorm = view == 1 ? lnorm1 : lnorm2;
  const Mat& x = view == 1 ? x1 : x2;
  if (lnorm.empty()) lnorm = build_laplacian(x, g.k, resolve_sigma(g, x)).normalized;
}

void PreparedProblem::ensure_manifold_product(int view) {
  Mat& p = view == 1 ? p1 : p2;
  const Mat& k = view == 1 ? k1 : k2;
  const Mat& lnorm = view == 1 ? lnorm1 : lnorm2;
  if (p.empty()) p = matmul(matmul(k, lnorm), k);
}

void PreparedProblem::ensure_agreement_products() {
  if (c11.empty()) {
    c11 = matmul(k1, k1);
    c22 = matmul(k2, k2);
    c12 = matmul(k1, k2);
  }
}

TrainedModel train_from_prepared(PreparedProblem& prep, const GraphConfig& g1,
                                 const GraphConfig& g2, const Hyperparams& hp,
                                 const SolveOptions& opts) {
  hp.validate();
  const std::size_t n = prep.l + prep.u;
  const Mat zero(n, n);

  // The Laplacian only enters through the gamma2 term; skip the graph build
  // entirely when it cannot contribute.
  if (hp.gamma2 != 0.0) {
    prep.ensure_laplacian(1, g1);
    prep.ensure_laplacian(2, g2);
    prep.ensure_manifold_product(1);
    prep.ensure_manifold_product(2);
  }
  if (hp.gamma3 != 0.0) prep.ensure_agreement_products();

  const Mat& p1 = hp.gamma2 != 0.0 ? prep.p1 : zero;
  const Mat& p2 = hp.gamma2 != 0.0 ? prep.p2 : zero;
  const Mat& c11 = hp.gamma3 != 0.0 ? prep.c11 : zero;
  const Mat& c22 = hp.gamma3 != 0.0 ? prep.c22 : zero;
  const Mat& c12 = hp.gamma3 != 0.0 ? prep.c12 : zero;

  QuadraticForm qf = assemble_from_products(prep.k1, prep.k2, p1, p2, c11, c22, c12, hp);
  const DualSolution sol = solve_dual(qf, prep.k1l, prep.k2l, prep.y, opts);
  auto [alpha1, alpha2] = recover_alphas(qf, prep.k1l, prep.k2l, prep.y, sol);

  TrainedModel m;
  m.alpha1 = std::move(alpha1);
  m.alpha2 = std::move(alpha2);
  m.train_view1 = prep.x1;
  m.train_view2 = prep.x2;
  m.kernel1 = prep.kernel1;
  m.kernel2 = prep.kernel2;
  m.hp = hp;
  m.y_labeled = prep.y;
  m.l = prep.l;
  m.u = prep.u;

  const Mat& lp1 = hp.gamma2 != 0.0 ? prep.lnorm1 : zero;
  const Mat& lp2 = hp.gamma2 != 0.0 ? prep.lnorm2 : zero;
  m.diag.primal_value =
      primal_objective(m.alpha1, m.alpha2, prep.k1, prep.k2, lp1, lp2, prep.y, prep.l, hp);
  m.diag.dual_value = sol.dual_value;
  m.diag.duality_gap = m.diag.primal_value - sol.dual_value;
  m.diag.kkt_residual = sol.kkt_residual;
  m.diag.iterations = sol.iterations;
  m.diag.converged = sol.converged;
  m.diag.jitter = sol.jitter;

  const Vec f1 = matvec(prep.k1, m.alpha1);
  const Vec f2 = matvec(prep.k2, m.alpha2);
  double slack = 0.0;
  for (std::size_t i = 0; i < prep.l; ++i) {
    slack += std::max(0.0, 1.0 - double(prep.y[i]) * f1[i]);
    slack += std::max(0.0, 1.0 - double(prep.y[i]) * f2[i]);
  }
  m.diag.slack_sum = slack;
  return m;
}

TrainedModel train(const MultiViewDataset& ds, const SplitDataset& split, const TrainConfig& cfg) {
  PreparedProblem prep = prepare_problem(ds, split, cfg.kernel1, cfg.kernel2);
  return train_from_prepared(prep, cfg.graph1, cfg.graph2, cfg.hp, cfg.solve);
}

TrainedModel train_lapsvm_from_prepared(PreparedProblem& prep, int view, const GraphConfig& g,
                                        const Hyperparams& hp0, const SolveOptions& opts) {
  if (view != 1 && view != 2)
    throw std::invalid_argument("train_lapsvm: view must be 1 or 2");
  Hyperparams hp = hp0;
  hp.gamma3 = 0.0;  // no multi-view coupling in a single-view model
  hp.validate();

  const Mat& k = view == 1 ? prep.k1 : prep.k2;
  const Mat& kl = view == 1 ? prep.k1l : prep.k2l;
  const std::size_t n = prep.l + prep.u;
  const Mat zero(n, n);

  if (hp.gamma2 != 0.0) {
    prep.ensure_laplacian(view, g);
    prep.ensure_manifold_product(view);
  }
  const Mat& p = hp.gamma2 != 0.0 ? (view == 1 ? prep.p1 : prep.p2) : zero;
  const Mat& lnorm = hp.gamma2 != 0.0 ? (view == 1 ? prep.lnorm1 : prep.lnorm2) : zero;

  QuadraticForm qf = assemble_single(k, p, hp);
  const DualSolution sol = solve_dual_single(qf, kl, prep.y, opts);
  Vec alpha = recover_alpha_single(qf, kl, prep.y, sol);

  TrainedModel m;
  m.alpha1 = alpha;
  m.alpha2 = std::move(alpha);
  m.train_view1 = view == 1 ? prep.x1 : prep.x2;
  m.train_view2 = m.train_view1;
  m.kernel1 = view == 1 ? prep.kernel1 : prep.kernel2;
  m.kernel2 = m.kernel1;
  m.hp = hp;
  m.y_labeled = prep.y;
  m.l = prep.l;
  m.u = prep.u;

  m.diag.primal_value = primal_objective_single(m.alpha1, k, lnorm, prep.y, prep.l, hp);
  m.diag.dual_value = sol.dual_value;
  m.diag.duality_gap = m.diag.primal_value - sol.dual_value;
  m.diag.kkt_residual = sol.kkt_residual;
  m.diag.iterations = sol.iterations;
  m.diag.converged = sol.converged;
  m.diag.jitter = sol.jitter;

  const Vec f = matvec(k, m.alpha1);
  double slack = 0.0;
  for (std::size_t i = 0; i < prep.l; ++i)
    slack += std::max(0.0, 1.0 - double(prep.y[i]) * f[i]);
  m.diag.slack_sum = 2.0 * slack;  // both slots hold the same view
  return m;
}

TrainedModel train_lapsvm(const MultiViewDataset& ds, const SplitDataset& split, int view,
                          const TrainConfig& cfg) {
  if (view != 1 && view != 2)
    throw std::invalid_argument("train_lapsvm: view must be 1 or 2");
  ds.validate();
  const std::size_t l = split.labeled_idx.size();
  if (l == 0) throw std::invalid_argument("train: no labeled points");

  // A prepared problem over the chosen view only; the other view's contents
  // never enter.
  PreparedProblem prep;
  prep.l = l;
  prep.u = split.unlabeled_idx.size();
  const std::vector<int> order = train_order(split);
  prep.x1 = take_rows(view == 1 ? ds.view1 : ds.view2, order);
  prep.x2 = prep.x1;
  for (int idx : split.labeled_idx) {
    const int y = ds.labels[idx];
    if (y != 1 && y != -1)
      throw std::invalid_argument("train: labeled row " + std::to_string(idx) +
                                  " has no +/-1 label");
    prep.y.push_back(y);
  }
  prep.kernel1 = resolve_kernel(view == 1 ? cfg.kernel1 : cfg.kernel2, prep.x1);
  prep.kernel2 = prep.kernel1;
  prep.k1 = gram(prep.kernel1, prep.x1, prep.x1);
  prep.k2 = prep.k1;
  prep.k1l = labeled_rows(prep.k1, l);
  prep.k2l = prep.k1l;

  return train_lapsvm_from_prepared(prep, 1, view == 1 ? cfg.graph1 : cfg.graph2, cfg.hp,
                                    cfg.solve);
}

TrainedModel train_cosvm(const MultiViewDataset& ds, const SplitDataset& split,
                         const TrainConfig& cfg) {
  TrainConfig c = cfg;
  c.hp.gamma2 = 0.0;
  return train(ds, split, c);
}

namespace {

Vec expand(const Mat& train_x, const KernelSpec& spec, const Vec& alpha, const Mat& x) {
  if (x.cols() != train_x.cols())
    throw std::invalid_argument("predict: feature dimension mismatch (got " +
                                std::to_string(x.cols()) + ", trained on " +
                                std::to_string(train_x.cols()) + ")");
  const Mat kq = gram(spec, x, train_x);
  return matvec(kq, alpha);
}

}  // namespace

Vec predict_view(const TrainedModel& m, const Mat& x, int view) {
  if (view != 1 && view != 2) throw std::invalid_argument("predict_view: view must be 1 or 2");
  return view == 1 ? expand(m.train_view1, m.kernel1, m.alpha1, x)
                   : expand(m.train_view2, m.kernel2, m.alpha2, x);
}

double predict_view(const TrainedModel& m, const Vec& x, int view) {
  Mat one(1, x.size());
  std::copy(x.begin(), x.end(), one.row(0));
  return predict_view(m, one, view)[0];
}

Vec predict_combined(const TrainedModel& m, const Mat& x1, const Mat& x2) {
  if (x1.rows() != x2.rows())
    throw std::invalid_argument("predict_combined: views disagree on row count");
  Vec f1 = predict_view(m, x1, 1);
  const Vec f2 = predict_view(m, x2, 2);
  for (std::size_t i = 0; i < f1.size(); ++i) f1[i] = 0.5 * (f1[i] + f2[i]);
  return f1;
}

double predict_combined(const TrainedModel& m, const Vec& x1, const Vec& x2) {
  return 0.5 * (predict_view(m, x1, 1) + predict_view(m, x2, 2));
}

int classify(double score) { return score >= 0.0 ? +1 : -1; }

namespace {

constexpr const char* kModelTag = "mvlap-model/1";

void write_vec(std::ostream& out, const char* name, const Vec& v) {
  out << name << ' ' << v.size();
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), " %.17g", x);
    out << buf;
  }
  out << '\n';
}

void write_mat(std::ostream& out, const char* name, const Mat& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols();
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.17g", m(i, j));
      out << buf;
    }
  out << '\n';
}

void write_kernel(std::ostream& out, const char* name, const KernelSpec& k) {
  out << name << ' ' << (k.kind == KernelKind::gaussian ? "gaussian" : "linear") << ' ';
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", k.width);
  out << buf << ' ' << (k.augment_bias ? 1 : 0) << '\n';
}

}  // namespace

void save_model(const TrainedModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << kModelTag << '\n';
  out << "counts " << m.l << ' ' << m.u << '\n';
  char buf[128];
  std::snprintf(buf, sizeof(buf), "gammas %.17g %.17g %.17g", m.hp.gamma1, m.hp.gamma2,
                m.hp.gamma3);
  out << buf << '\n';
  write_kernel(out, "kernel1", m.kernel1);
  write_kernel(out, "kernel2", m.kernel2);
  write_vec(out, "alpha1", m.alpha1);
  write_vec(out, "alpha2", m.alpha2);
  out << "ylab " << m.y_labeled.size();
  for (int y : m.y_labeled) out << ' ' << y;
  out << '\n';
  write_mat(out, "view1", m.train_view1);
  write_mat(out, "view2", m.train_view2);
  if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {

std::string expect_word(std::istream& in, const std::string& path) {
  std::string w;
  if (!(in >> w)) throw std::runtime_error(path + ": truncated model file");
  return w;
}

void expect_key(std::istream& in, const std::string& path, const char* key) {
  const std::string w = expect_word(in, path);
  if (w != key)
    throw std::runtime_error(path + ": expected '" + key + "', found '" + w + "'");
}

Vec read_vec(std::istream& in, const std::string& path, const char* key) {
  expect_key(in, path, key);
  std::size_t n;
  if (!(in >> n)) throw std::runtime_error(path + ": bad length for " + key);
  Vec v(n);
  for (double& x : v)
    if (!(in >> x)) throw std::runtime_error(path + ": truncated " + std::string(key));
  return v;
}

Mat read_mat(std::istream& in, const std::string& path, const char* key) {
  expect_key(in, path, key);
  std::size_t r, c;
  if (!(in >> r >> c)) throw std::runtime_error(path + ": bad shape for " + key);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (!(in >> m(i, j))) throw std::runtime_error(path + ": truncated " + std::string(key));
  return m;
}

KernelSpec read_kernel(std::istream& in, const std::string& path, const char* key) {
  expect_key(in, path, key);
  KernelSpec k;
  const std::string kind = expect_word(in, path);
  if (kind == "gaussian")
    k.kind = KernelKind::gaussian;
  else if (kind == "linear")
    k.kind = KernelKind::linear;
  else
    throw std::runtime_error(path + ": unknown kernel kind '" + kind + "'");
  int bias;
  if (!(in >> k.width >> bias)) throw std::runtime_error(path + ": truncated kernel spec");
  k.augment_bias = bias != 0;
  return k;
}

}  // namespace

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string tag;
  std::getline(in, tag);
  if (tag != kModelTag)
    throw std::runtime_error(path + ": not a " + std::string(kModelTag) + " file");

  TrainedModel m;
  expect_key(in, path, "counts");
  if (!(in >> m.l >> m.u)) throw std::runtime_error(path + ": bad counts");
  expect_key(in, path, "gammas");
  if (!(in >> m.hp.gamma1 >> m.hp.gamma2 >> m.hp.gamma3))
    throw std::runtime_error(path + ": bad gammas");
  m.kernel1 = read_kernel(in, path, "kernel1");
  m.kernel2 = read_kernel(in, path, "kernel2");
  m.alpha1 = read_vec(in, path, "alpha1");
  m.alpha2 = read_vec(in, path, "alpha2");
  expect_key(in, path, "ylab");
  std::size_t ny;
  if (!(in >> ny)) throw std::runtime_error(path + ": bad ylab length");
  m.y_labeled.resize(ny);
  for (int& y : m.y_labeled)
    if (!(in >> y)) throw std::runtime_error(path + ": truncated ylab");
  m.train_view1 = read_mat(in, path, "view1");
  m.train_view2 = read_mat(in, path, "view2");

  if (m.alpha1.size() != m.l + m.u || m.alpha2.size() != m.l + m.u ||
      m.train_view1.rows() != m.l + m.u || m.train_view2.rows() != m.l + m.u)
    throw std::runtime_error(path + ": inconsistent sizes in model file");
  return m;
}

}  // namespace mvlap
