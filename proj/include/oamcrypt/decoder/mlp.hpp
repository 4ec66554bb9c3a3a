#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/common/rng.hpp"

namespace oamcrypt {

/// Single-hidden-layer classifier: sigmoid hidden units, softmax outputs.
struct MLPModel {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // classes x hidden
  Eigen::VectorXd b2;
  std::vector<std::string> class_names;

  MLPModel() = default;
  MLPModel(int input_dim, int hidden, int classes)
      : w1(Eigen::MatrixXd::Zero(hidden, input_dim)),
        b1(Eigen::VectorXd::Zero(hidden)),
        w2(Eigen::MatrixXd::Zero(classes, hidden)),
        b2(Eigen::VectorXd::Zero(classes)) {
    for (int c = 0; c < classes; ++c) class_names.push_back(std::to_string(c));
  }

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int class_count() const { return static_cast<int>(w2.rows()); }
  Eigen::Index parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

  void validate() const {
    if (b1.size() != w1.rows() || w2.cols() != w1.rows() || b2.size() != w2.rows())
      throw std::invalid_argument("MLPModel: inconsistent layer dimensions");
    if (static_cast<Eigen::Index>(class_names.size()) != w2.rows())
      throw std::invalid_argument("MLPModel: class-name table does not match class count");
    if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() || !b2.allFinite())
      throw std::invalid_argument("MLPModel: non-finite weights");
  }

  /// Flat parameter vector: w1, b1, w2, b2, each in Eigen (column-major) order.
  Eigen::VectorXd pack() const {
    Eigen::VectorXd v(parameter_count());
    Eigen::Index o = 0;
    v.segment(o, w1.size()) = w1.reshaped(); o += w1.size();
    v.segment(o, b1.size()) = b1;            o += b1.size();
    v.segment(o, w2.size()) = w2.reshaped(); o += w2.size();
    v.segment(o, b2.size()) = b2;
    return v;
  }

  void unpack(const Eigen::VectorXd& v) {
    if (v.size() != parameter_count()) throw std::invalid_argument("MLPModel: parameter size");
    Eigen::Index o = 0;
    w1.reshaped() = v.segment(o, w1.size()); o += w1.size();
    b1 = v.segment(o, b1.size());            o += b1.size();
    w2.reshaped() = v.segment(o, w2.size()); o += w2.size();
    b2 = v.segment(o, b2.size());
  }
};

/// Uniform in [-s, s], s = sqrt(6 / (fan_in + fan_out)), zero biases.
inline MLPModel init_mlp(int input_dim, int hidden, int classes, std::uint64_t seed,
                         double scale = 1.0) {
  MLPModel m(input_dim, hidden, classes);
  auto rng = make_stream(seed, {"mlp/init", 0, 0});
  auto fill = [&rng, scale](Eigen::MatrixXd& w) {
    const double s = scale * std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> u(-s, s);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = u(rng);
  };
  fill(m.w1);
  fill(m.w2);
  return m;
}

inline Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

/// Column-wise softmax with max subtraction.
inline Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index n = 0; n < logits.cols(); ++n) {
    const auto col = logits.col(n);
    Eigen::ArrayXd e = (col.array() - col.maxCoeff()).exp();
    p.col(n) = (e / e.sum()).matrix();
  }
  return p;
}

struct ForwardPass {
  Eigen::MatrixXd hidden;  // H x N
  Eigen::MatrixXd probs;   // C x N
};

inline ForwardPass forward_batch(const MLPModel& m, const Eigen::MatrixXd& x) {
  ForwardPass f;
  f.hidden = sigmoid((m.w1 * x).colwise() + m.b1);
  f.probs = softmax_columns((m.w2 * f.hidden).colwise() + m.b2);
  return f;
}

/// Class probabilities for one feature vector.
inline Eigen::VectorXd forward(const MLPModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.input_dim()) throw std::invalid_argument("forward: feature dimension mismatch");
  return forward_batch(m, x).probs.col(0);
}

inline constexpr double kProbabilityFloor = 1e-12;

/// -ln p[label], p clamped below at 1e-12.
inline double cross_entropy(const Eigen::VectorXd& p, int label) {
  return -std::log(std::max(p[label], kProbabilityFloor));
}

inline double mean_cross_entropy(const Eigen::MatrixXd& probs, const std::vector<int>& labels) {
  double s = 0.0;
  for (std::size_t n = 0; n < labels.size(); ++n)
    s -= std::log(std::max(probs(labels[n], static_cast<Eigen::Index>(n)), kProbabilityFloor));
  return s / static_cast<double>(labels.size());
}

/// Mean cross-entropy over a labeled batch and its exact gradient with
/// respect to the packed parameters.
class MlpObjective {
 public:
  MlpObjective(MLPModel shape, const Eigen::MatrixXd& x, const std::vector<int>& labels)
      : model_(std::move(shape)), x_(x), labels_(labels) {
    if (x.cols() != static_cast<Eigen::Index>(labels.size()) || labels.empty())
      throw std::invalid_argument("MlpObjective: batch must be non-empty with one label per column");
    for (int y : labels)
      if (y < 0 || y >= model_.class_count()) throw std::invalid_argument("MlpObjective: label range");
  }

  double value(const Eigen::VectorXd& params) const {
    model_.unpack(params);
    return mean_cross_entropy(forward_batch(model_, x_).probs, labels_);
  }

  double value_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const {
    model_.unpack(params);
    const auto f = forward_batch(model_, x_);
    const double n = static_cast<double>(labels_.size());
    Eigen::MatrixXd delta2 = f.probs;
    for (std::size_t k = 0; k < labels_.size(); ++k) delta2(labels_[k], static_cast<Eigen::Index>(k)) -= 1.0;
    delta2 /= n;
    const Eigen::MatrixXd delta1 =
        ((model_.w2.transpose() * delta2).array() * f.hidden.array() * (1.0 - f.hidden.array()))
            .matrix();
    MLPModel g = model_;
    g.w2 = delta2 * f.hidden.transpose();
    g.b2 = delta2.rowwise().sum();
    g.w1 = delta1 * x_.transpose();
    g.b1 = delta1.rowwise().sum();
    grad = g.pack();
    return mean_cross_entropy(f.probs, labels_);
  }

 private:
  mutable MLPModel model_;
  const Eigen::MatrixXd& x_;
  const std::vector<int>& labels_;
};

/// Gradient of the mean cross-entropy at the model's current weights.
inline Eigen::VectorXd gradient(const MLPModel& m, const Eigen::MatrixXd& x,
                                const std::vector<int>& labels) {
  MlpObjective obj(m, x, labels);
  Eigen::VectorXd g;
  obj.value_gradient(m.pack(), g);
  return g;
}

/// Index of the largest probability; ties go to the lowest index.
inline int argmax(const Eigen::VectorXd& p) {
  int best = 0;
  for (Eigen::Index k = 1; k < p.size(); ++k)
    if (p[k] > p[best]) best = static_cast<int>(k);
  return best;
}

}  // namespace oamcrypt
