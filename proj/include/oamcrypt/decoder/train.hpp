#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/decoder/evaluate.hpp"
#include "oamcrypt/decoder/mlp.hpp"
#include "oamcrypt/decoder/scg.hpp"

namespace oamcrypt {

struct TrainConfig {
  int hidden = 64;
  int max_epochs = 1000;
  SplitFractions fractions{};
  int patience = 6;  // consecutive validation failures
  double scg_sigma = 5e-5;
  double scg_lambda = 5e-7;
  double init_scale = 1.0;
  std::uint64_t seed = 42;

  void validate() const {
    fractions.validate();
    if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max epochs must be >= 1");
    if (hidden < 1) throw std::invalid_argument("TrainConfig: hidden width must be >= 1");
  }
};

struct LabeledSet {
  Eigen::MatrixXd x;  // features as columns
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }

  LabeledSet subset(const std::vector<std::size_t>& idx) const {
    LabeledSet s{Eigen::MatrixXd(x.rows(), static_cast<Eigen::Index>(idx.size())), {}};
    for (std::size_t k = 0; k < idx.size(); ++k) {
      s.x.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(idx[k]));
      s.labels.push_back(labels[idx[k]]);
    }
    return s;
  }
};

struct TrainLog {
  int epochs = 0;
  int best_epoch = 0;
  int accepted_steps = 0;
  StopReason reason = StopReason::max_epochs;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  std::vector<double> train_curve;       // per epoch
  std::vector<double> validation_curve;  // per epoch
};

struct TrainResult {
  MLPModel model;
  TrainLog log;
};

/// Full-batch SCG on the training set. Validation cross-entropy is checked
/// every epoch; `patience` consecutive epochs above the best value stop the
/// run, and the best-validation weights are returned.
inline TrainResult scg_train(const LabeledSet& train, const LabeledSet& validation,
                             std::vector<std::string> class_names, const TrainConfig& cfg) {
  cfg.validate();
  if (train.size() == 0) throw std::invalid_argument("scg_train: empty training set");
  const int classes = static_cast<int>(class_names.size());
  MLPModel model = init_mlp(static_cast<int>(train.x.rows()), cfg.hidden, classes, cfg.seed,
                            cfg.init_scale);
  model.class_names = std::move(class_names);

  MlpObjective objective(model, train.x, train.labels);
  const bool have_val = validation.size() > 0;
  MLPModel probe = model;
  auto val_loss = [&](const Eigen::VectorXd& w) {
    probe.unpack(w);
    return mean_cross_entropy(forward_batch(probe, validation.x).probs, validation.labels);
  };

  TrainLog log;
  Eigen::VectorXd best = model.pack();
  double best_val = have_val ? val_loss(best) : std::numeric_limits<double>::infinity();
  int failures = 0;

  auto monitor = [&](const ScgEpoch& e, const Eigen::VectorXd& w) {
    log.train_curve.push_back(e.loss);
    if (!have_val) {
      best = w;
      log.best_epoch = e.epoch;
      return false;
    }
    const double v = val_loss(w);
    log.validation_curve.push_back(v);
    if (v < best_val) {
      best_val = v;
      best = w;
      log.best_epoch = e.epoch;
      failures = 0;
    } else if (v > best_val) {
      ++failures;
    }
    return failures >= cfg.patience;
  };

  ScgOptions opt;
  opt.max_epochs = cfg.max_epochs;
  opt.sigma = cfg.scg_sigma;
  opt.lambda_init = cfg.scg_lambda;
  const auto res = scg_minimize(objective, model.pack(), opt, monitor);
  if (!have_val) best = res.weights;

  model.unpack(best);
  log.epochs = res.epochs;
  log.accepted_steps = res.accepted_steps;
  log.reason = res.reason;
  log.train_loss = objective.value(best);
  log.validation_loss = have_val ? best_val : 0.0;
  return {std::move(model), std::move(log)};
}

}  // namespace oamcrypt
