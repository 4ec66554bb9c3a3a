#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/common/rng.hpp"
#include "oamcrypt/decoder/mlp.hpp"

namespace oamcrypt {

struct SplitFractions {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;

  void validate() const {
    if (train <= 0.0 || validation < 0.0 || test < 0.0 ||
        std::abs(train + validation + test - 1.0) > 1e-9)
      throw std::invalid_argument("split fractions must be non-negative and sum to 1");
  }
};

struct SplitIndices {
  std::vector<std::size_t> train, validation, test;
};

/// Stratified split: each class is shuffled with its own seeded stream and
/// cut by the fractions (at least one sample in each non-empty split).
/// Index lists come back sorted.
inline SplitIndices split_dataset(const std::vector<int>& labels, int class_count,
                                  const SplitFractions& frac, std::uint64_t seed) {
  frac.validate();
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(class_count));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count)
      throw std::invalid_argument("split_dataset: label out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  SplitIndices out;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    if (idx.size() < 3)
      throw std::invalid_argument("split_dataset: class " + std::to_string(c) +
                                  " has fewer than 3 samples");
    auto rng = make_stream(seed, {"split/shuffle", c, 0});
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n = static_cast<double>(idx.size());
    auto n_val = static_cast<std::size_t>(std::llround(frac.validation * n));
    auto n_test = static_cast<std::size_t>(std::llround(frac.test * n));
    if (frac.validation > 0.0) n_val = std::max<std::size_t>(n_val, 1);
    if (frac.test > 0.0) n_test = std::max<std::size_t>(n_test, 1);
    const std::size_t n_train = idx.size() - n_val - n_test;
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<long>(n_train));
    out.validation.insert(out.validation.end(), idx.begin() + static_cast<long>(n_train),
                          idx.begin() + static_cast<long>(n_train + n_val));
    out.test.insert(out.test.end(), idx.begin() + static_cast<long>(n_train + n_val), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

/// Counts with rows = transmitted class, columns = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes) : counts_(Eigen::MatrixXd::Zero(classes, classes)) {}

  void add(int truth, int predicted) { counts_(truth, predicted) += 1.0; }

  const Eigen::MatrixXd& counts() const { return counts_; }
  int classes() const { return static_cast<int>(counts_.rows()); }
  double total() const { return counts_.sum(); }

  double accuracy() const {
    const double t = total();
    return t > 0.0 ? counts_.trace() / t : 0.0;
  }

  /// Each non-empty row divided by its sum; empty rows stay zero.
  Eigen::MatrixXd row_normalized() const {
    Eigen::MatrixXd m = counts_;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double s = m.row(r).sum();
      if (s > 0.0) m.row(r) /= s;
    }
    return m;
  }

  double mean_diagonal() const { return row_normalized().diagonal().mean(); }

 private:
  Eigen::MatrixXd counts_;
};

struct Evaluation {
  double accuracy = 0.0;
  ConfusionMatrix confusion{1};
  std::vector<int> predictions;
};

/// Predicts argmax class for each column; accuracy = correct / total.
inline Evaluation evaluate(const MLPModel& model, const Eigen::MatrixXd& x,
                           const std::vector<int>& labels) {
  if (labels.empty()) throw std::invalid_argument("evaluate: empty test set");
  Evaluation ev{0.0, ConfusionMatrix(model.class_count()), {}};
  const auto probs = forward_batch(model, x).probs;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const int pred = argmax(probs.col(static_cast<Eigen::Index>(n)));
    ev.predictions.push_back(pred);
    ev.confusion.add(labels[n], pred);
  }
  ev.accuracy = ev.confusion.accuracy();
  return ev;
}

/// RFC 4180 quoting for labels that contain separators or quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// CSV with a header row and header column of class labels.
inline std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& row_names,
                              const std::vector<std::string>& col_names) {
  std::ostringstream os;
  os.precision(17);
  os << "true\\predicted";
  for (const auto& c : col_names) os << ',' << csv_field(c);
  os << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << csv_field(row_names[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ',' << m(r, c);
    os << '\n';
  }
  return os.str();
}

}  // namespace oamcrypt
