// Fully connected Q-network with manual backprop, RMSProp and replay memory.
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace udn {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// ReLU on every hidden layer, linear output head.
class QNetwork {
 public:
  /// Zero-initialized network; sizes = {input, hidden..., output}.
  explicit QNetwork(std::vector<int> layer_sizes);

  /// Weights ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases.
  static QNetwork random(std::vector<int> layer_sizes, std::mt19937_64& rng);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::size_t parameter_count() const;
  bool all_finite() const;

  /// Throws std::invalid_argument on input dimension mismatch.
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  /// Columns of `inputs` are samples.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  friend bool operator==(const QNetwork& a, const QNetwork& b);

 private:
  std::vector<int> sizes_;
  std::vector<DenseLayer> layers_;
};

using Gradients = std::vector<DenseLayer>;

struct LossAndGradients {
  double loss = 0.0;
  Gradients gradients;
};

/// Mean squared TD error over the batch; only the taken action's output
/// receives gradient and targets are constants.
LossAndGradients loss_and_gradients(const QNetwork& net, const Eigen::MatrixXd& states,
                                    std::span<const int> actions, std::span<const double> targets);
/// Same, writing into `grads` (reusing its storage) and returning the loss.
double loss_and_gradients(const QNetwork& net, const Eigen::MatrixXd& states,
                          std::span<const int> actions, std::span<const double> targets,
                          Gradients& grads);

/// y = reward + gamma * max_a' Q_target(next_state, a'). Always bootstraps.
double td_target(double reward, const Eigen::VectorXd& next_state, const QNetwork& target,
                 double gamma);

/// v <- rho v + (1 - rho) g^2;  theta <- theta - lr g / (sqrt(v) + delta)
class RmsProp {
 public:
  RmsProp(const QNetwork& shape, double learning_rate, double decay = 0.9, double delta = 1e-8);

  void step(QNetwork& net, const Gradients& grads);
  void reset();

  double learning_rate() const { return learning_rate_; }
  const std::vector<DenseLayer>& mean_square() const { return mean_square_; }

 private:
  double learning_rate_;
  double decay_;
  double delta_;
  std::vector<DenseLayer> mean_square_;
};

/// One agent's experience (s, a, u, s'); states are packed QoS bits.
struct Transition {
  std::uint64_t state = 0;
  int action = 0;
  double reward = 0.0;
  std::uint64_t next_state = 0;
};

/// Fixed-capacity ring buffer overwriting its oldest entry.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(const Transition& t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return items_[i]; }

  /// min(batch, size()) distinct indices, uniformly without replacement.
  std::vector<std::size_t> sample_indices(std::size_t batch, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

/// Unpacks the low `width` bits of a state key into a 0/1 column.
Eigen::VectorXd encode_state(std::uint64_t key, int width);

/// Binary checkpoint: magic, network count, then per network its layer sizes
/// and raw little-endian doubles (weights row-major, then biases).
void save_networks(const std::filesystem::path& path, std::span<const QNetwork> networks);
std::vector<QNetwork> load_networks(const std::filesystem::path& path);

}  // namespace udn
