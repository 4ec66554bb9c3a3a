#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace oamcrypt {

struct ScgOptions {
  int max_epochs = 1000;
  double sigma = 5e-5;        // finite-difference scale for the Hessian-vector estimate
  double lambda_init = 5e-7;  // initial Levenberg-Marquardt scale
  double min_gradient = 1e-8;
};

enum class StopReason { max_epochs, min_gradient, monitor };

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::min_gradient: return "min_gradient";
    case StopReason::monitor: return "validation";
  }
  return "?";
}

/// What the monitor sees after each epoch.
struct ScgEpoch {
  int epoch = 0;
  double loss = 0.0;  // objective at the current (accepted) weights
  bool accepted = false;
  double lambda = 0.0;
  double gradient_norm = 0.0;
};

struct ScgResult {
  Eigen::VectorXd weights;
  double loss = 0.0;
  int epochs = 0;
  int accepted_steps = 0;
  StopReason reason = StopReason::max_epochs;
};

/// Minimizes obj with Moller's scaled conjugate gradient.
///
/// Objective requirements:
///   double value(const VectorXd& w) const;
///   double value_gradient(const VectorXd& w, VectorXd& grad) const;
/// The monitor is called once per epoch with the current weights and returns
/// true to stop.
template <class Objective, class Monitor>
ScgResult scg_minimize(const Objective& obj, Eigen::VectorXd w, const ScgOptions& opt,
                       Monitor&& monitor) {
  const auto n = w.size();
  Eigen::VectorXd grad;
  double loss = obj.value_gradient(w, grad);
  if (!std::isfinite(loss)) throw std::runtime_error("scg: non-finite initial loss");
  Eigen::VectorXd r = -grad;
  Eigen::VectorXd p = r;
  Eigen::VectorXd grad_probe, grad_trial;
  bool success = true;
  double lambda = opt.lambda_init;
  double lambda_bar = 0.0;
  double delta = 0.0;

  ScgResult res;
  res.reason = StopReason::max_epochs;
  for (int k = 1; k <= opt.max_epochs; ++k) {
    if (r.norm() < opt.min_gradient) {
      res.reason = StopReason::min_gradient;
      break;
    }
    const double p2 = p.squaredNorm();
    if (success) {
      const double sigma_k = opt.sigma / std::sqrt(p2);
      obj.value_gradient(w + sigma_k * p, grad_probe);
      delta = p.dot(grad_probe - grad) / sigma_k;
    }
    // scale the curvature estimate
    delta += (lambda - lambda_bar) * p2;
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / p2);
      delta = -delta + lambda * p2;
      lambda = lambda_bar;
    }
    const double mu = p.dot(r);
    if (mu == 0.0) {
      res.reason = StopReason::min_gradient;
      break;
    }
    const double alpha = mu / delta;
    const Eigen::VectorXd w_trial = w + alpha * p;
    const double loss_trial = obj.value_gradient(w_trial, grad_trial);
    if (!std::isfinite(loss_trial))
      throw std::runtime_error("scg: non-finite loss at epoch " + std::to_string(k) +
                               " (step length " + std::to_string(alpha) + ")");
    const double comparison = 2.0 * delta * (loss - loss_trial) / (mu * mu);

    if (comparison >= 0.0) {
      w = w_trial;
      loss = loss_trial;
      grad = grad_trial;
      const Eigen::VectorXd r_new = -grad;
      lambda_bar = 0.0;
      success = true;
      ++res.accepted_steps;
      if (k % n == 0) {
        p = r_new;
      } else {
        const double beta = (r_new.squaredNorm() - r_new.dot(r)) / mu;
        p = r_new + beta * p;
      }
      r = r_new;
      if (comparison >= 0.75) lambda *= 0.25;
    } else {
      lambda_bar = lambda;
      success = false;
    }
    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p2;

    res.epochs = k;
    if (monitor(ScgEpoch{k, loss, comparison >= 0.0, lambda, r.norm()}, w)) {
      res.reason = StopReason::monitor;
      break;
    }
  }
  res.weights = std::move(w);
  res.loss = loss;
  return res;
}

template <class Objective>
ScgResult scg_minimize(const Objective& obj, Eigen::VectorXd w, const ScgOptions& opt) {
  return scg_minimize(obj, std::move(w), opt, [](const ScgEpoch&, const Eigen::VectorXd&) { return false; });
}

}  // namespace oamcrypt
