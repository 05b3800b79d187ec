// Central finite-difference reference for the TD loss gradient.
#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "udn/qnetwork.hpp"

namespace udn::test {

/// Mean squared error of the taken-action outputs, one forward pass per sample.
inline double reference_loss(const QNetwork& net, const Eigen::MatrixXd& states,
                             const std::vector<int>& actions, const std::vector<double>& targets) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    const double q = net.forward(states.col(c))(actions[static_cast<std::size_t>(c)]);
    const double e = q - targets[static_cast<std::size_t>(c)];
    sum += e * e;
  }
  return sum / static_cast<double>(states.cols());
}

struct GradCheck {
  double relative_error = 0.0;
  std::size_t parameters = 0;
  /// Smallest |pre-activation| at any hidden unit over the batch. Central
  /// differences are only meaningful when this is well above the step size.
  double kink_margin = 0.0;
};

inline double kink_margin(const QNetwork& net, const Eigen::MatrixXd& states) {
  double margin = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd a = states;
  for (std::size_t k = 0; k + 1 < net.layers().size(); ++k) {
    const auto& layer = net.layers()[k];
    const Eigen::MatrixXd z = (layer.weight * a).colwise() + layer.bias;
    margin = std::min(margin, z.cwiseAbs().minCoeff());
    a = z.cwiseMax(0.0);
  }
  return margin;
}

/// Random net with the given sizes and a random batch; compares the analytic
/// gradient against (L(theta + h) - L(theta - h)) / 2h over every parameter.
/// The relative error is ||analytic - numeric|| / max(||analytic||, ||numeric||).
inline GradCheck gradient_check(const std::vector<int>& sizes, int batch, std::mt19937_64& rng,
                                double h = 1e-6) {
  QNetwork net = QNetwork::random(sizes, rng);
  // Nonzero biases so that the bias path is exercised.
  std::normal_distribution<double> noise(0.0, 0.3);
  for (auto& layer : net.layers())
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = noise(rng);

  std::bernoulli_distribution bit(0.5);
  std::uniform_int_distribution<int> act(0, sizes.back() - 1);
  std::normal_distribution<double> tgt(0.0, 2.0);
  Eigen::MatrixXd states(sizes.front(), batch);
  std::vector<int> actions(static_cast<std::size_t>(batch));
  std::vector<double> targets(static_cast<std::size_t>(batch));
  for (int c = 0; c < batch; ++c) {
    for (int r = 0; r < sizes.front(); ++r) states(r, c) = bit(rng) ? 1.0 : 0.0;
    actions[static_cast<std::size_t>(c)] = act(rng);
    targets[static_cast<std::size_t>(c)] = tgt(rng);
  }

  const LossAndGradients lg = loss_and_gradients(net, states, actions, targets);
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  GradCheck out;
  out.kink_margin = kink_margin(net, states);
  auto probe = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = reference_loss(net, states, actions, targets);
    param = saved - h;
    const double down = reference_loss(net, states, actions, targets);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    diff2 += (analytic - numeric) * (analytic - numeric);
    a2 += analytic * analytic;
    n2 += numeric * numeric;
    ++out.parameters;
  };
  for (std::size_t k = 0; k < net.layers().size(); ++k) {
    auto& layer = net.layers()[k];
    const auto& g = lg.gradients[k];
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) probe(layer.weight(r, c), g.weight(r, c));
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) probe(layer.bias(r), g.bias(r));
  }
  const double scale = std::sqrt(std::max(a2, n2));
  out.relative_error = scale == 0.0 ? 0.0 : std::sqrt(diff2) / scale;
  return out;
}

}  // namespace udn::test
