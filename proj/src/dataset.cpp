#include "mvlap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mvlap/rng.hpp"

namespace mvlap {

void MultiViewDataset::validate() const {
  if (view1.rows() != labels.size() || view2.rows() != labels.size())
    throw std::invalid_argument("dataset: views and labels disagree on row count");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 1 && labels[i] != -1 && labels[i] != 0)
      throw std::invalid_argument("dataset: label outside {+1,-1,0} at row " + std::to_string(i));
}

MultiViewDataset gen_two_moons_two_lines(std::size_t n_per_class, double noise,
                                         std::uint64_t seed) {
  if (n_per_class == 0) throw std::invalid_argument("gen_two_moons_two_lines: n_per_class == 0");
  if (noise < 0.0) throw std::invalid_argument("gen_two_moons_two_lines: negative noise");

  constexpr double kPi = 3.14159265358979323846;
  const std::size_t m = n_per_class;
  Rng rng(seed);

  MultiViewDataset ds;
  ds.view1 = Mat(2 * m, 2);
  ds.view2 = Mat(2 * m, 2);
  ds.labels.assign(2 * m, 0);

  for (int cls = 0; cls < 2; ++cls) {
    const int label = cls == 0 ? +1 : -1;
    const double moon_dx = cls == 0 ? 0.0 : 1.0;
    const double moon_dy = cls == 0 ? 0.0 : -0.5;
    const double line_y = cls == 0 ? 1.0 : -1.0;

    // Moon points on the arc, then line points, then the random pairing.
    Mat moons(m, 2), lines(m, 2);
    for (std::size_t i = 0; i < m; ++i) {
      const double theta = rng.uniform(0.0, kPi);
      moons(i, 0) = moon_dx + std::cos(theta) + noise * rng.normal();
      moons(i, 1) = moon_dy + std::sin(theta) + noise * rng.normal();
    }
    for (std::size_t i = 0; i < m; ++i) {
      lines(i, 0) = rng.uniform(-1.0, 1.0) + noise * rng.normal();
      lines(i, 1) = line_y + noise * rng.normal();
    }
    const std::vector<int> pairing = rng.permutation(m);

    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t row = cls * m + i;
      ds.view1(row, 0) = moons(i, 0);
      ds.view1(row, 1) = moons(i, 1);
      ds.view2(row, 0) = lines(pairing[i], 0);
      ds.view2(row, 1) = lines(pairing[i], 1);
      ds.labels[row] = label;
    }
  }
  return ds;
}

SplitDataset make_split(const MultiViewDataset& ds, const SplitSpec& spec) {
  ds.validate();
  const std::size_t total =
      spec.n_labeled + spec.n_unlabeled + spec.n_validation + spec.n_test;
  if (total > ds.n())
    throw std::invalid_argument("make_split: requested sizes sum to " + std::to_string(total) +
                                " but dataset has " + std::to_string(ds.n()) + " rows");
  if (spec.n_labeled < 1) throw std::invalid_argument("make_split: need at least one labeled row");

  Rng rng(spec.seed);
  constexpr int kMaxRedraws = 100;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const std::vector<int> perm = rng.permutation(ds.n());

    bool pos = false, neg = false, bad = false;
    for (std::size_t i = 0; i < spec.n_labeled; ++i) {
      const int y = ds.labels[perm[i]];
      if (y == +1) pos = true;
      else if (y == -1) neg = true;
      else bad = true;  // a 0-labeled row cannot serve as labeled
    }
    if (bad || !pos || !neg) continue;

    SplitDataset split;
    auto it = perm.begin();
    split.labeled_idx.assign(it, it + spec.n_labeled);
    it += spec.n_labeled;
    split.unlabeled_idx.assign(it, it + spec.n_unlabeled);
    it += spec.n_unlabeled;
    split.validation_idx.assign(it, it + spec.n_validation);
    it += spec.n_validation;
    split.test_idx.assign(it, it + spec.n_test);
    return split;
  }
  throw std::runtime_error(
      "make_split: labeled draw missed a class (or drew an unlabeled row) in " +
      std::to_string(kMaxRedraws) + " attempts");
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::vector<double>> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      const char* field_end = std::find(p, end, ',');
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, field_end, v);
      if (ec != std::errc() || ptr != field_end)
        throw std::runtime_error(path + ": malformed numeric field at row " +
                                 std::to_string(lineno) + ", column " +
                                 std::to_string(row.size() + 1));
      row.push_back(v);
      if (field_end == end) break;
      p = field_end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ": row " + std::to_string(lineno) + " has " +
                               std::to_string(row.size()) + " fields, expected " +
                               std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat to_mat(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i));
  return m;
}

}  // namespace

Mat load_csv_matrix(const std::string& path) { return to_mat(parse_csv(path)); }

void save_csv_matrix(const Mat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << fmt17(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

MultiViewDataset load_dataset(const std::string& view1_path, const std::string& view2_path,
                              const std::string& labels_path) {
  MultiViewDataset ds;
  ds.view1 = load_csv_matrix(view1_path);
  ds.view2 = load_csv_matrix(view2_path);
  if (ds.view1.rows() != ds.view2.rows())
    throw std::runtime_error("row-count mismatch: " + view1_path + " has " +
                             std::to_string(ds.view1.rows()) + " rows, " + view2_path + " has " +
                             std::to_string(ds.view2.rows()));

  const auto raw = parse_csv(labels_path);
  ds.labels.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != 1)
      throw std::runtime_error(labels_path + ": row " + std::to_string(i + 1) +
                               " must hold a single label");
    const double v = raw[i][0];
    if (v != 1.0 && v != -1.0 && v != 0.0)
      throw std::runtime_error(labels_path + ": label outside {+1,-1,0} at row " +
                               std::to_string(i + 1));
    ds.labels.push_back(static_cast<int>(v));
  }
  if (ds.labels.size() != ds.view1.rows())
    throw std::runtime_error("row-count mismatch: " + labels_path + " has " +
                             std::to_string(ds.labels.size()) + " rows, views have " +
                             std::to_string(ds.view1.rows()));
  return ds;
}

void save_dataset(const MultiViewDataset& ds, const std::string& view1_path,
                  const std::string& view2_path, const std::string& labels_path) {
  ds.validate();
  save_csv_matrix(ds.view1, view1_path);
  save_csv_matrix(ds.view2, view2_path);
  std::ofstream out(labels_path);
  if (!out) throw std::runtime_error(labels_path + ": cannot open for writing");
  for (int y : ds.labels) out << y << '\n';
  if (!out) throw std::runtime_error(labels_path + ": write failed");
}

}  // namespace mvlap
