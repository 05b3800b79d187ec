#include "udn/qnetwork.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace udn {

QNetwork::QNetwork(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("network needs input and output sizes");
  for (int s : sizes_)
    if (s < 1) throw std::invalid_argument("layer sizes must be >= 1");
  for (std::size_t k = 1; k < sizes_.size(); ++k)
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[k], sizes_[k - 1]),
                       Eigen::VectorXd::Zero(sizes_[k])});
}

QNetwork QNetwork::random(std::vector<int> layer_sizes, std::mt19937_64& rng) {
  QNetwork net(std::move(layer_sizes));
  for (auto& layer : net.layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.cols()));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = u(rng);
  }
  return net;
}

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool QNetwork::all_finite() const {
  for (const auto& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& input) const {
  if (input.size() != input_size())
    throw std::invalid_argument("network input has " + std::to_string(input.size()) +
                                " entries, expected " + std::to_string(input_size()));
  Eigen::VectorXd h = input;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    Eigen::VectorXd z = layers_[k].weight * h + layers_[k].bias;
    h = (k + 1 < layers_.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return h;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_size()) throw std::invalid_argument("batch input dimension mismatch");
  Eigen::MatrixXd h = inputs;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    Eigen::MatrixXd z = layers_[k].weight * h;
    z.colwise() += layers_[k].bias;
    h = (k + 1 < layers_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
  }
  return h;
}

bool operator==(const QNetwork& a, const QNetwork& b) {
  if (a.sizes_ != b.sizes_) return false;
  for (std::size_t k = 0; k < a.layers_.size(); ++k)
    if (a.layers_[k].weight != b.layers_[k].weight || a.layers_[k].bias != b.layers_[k].bias)
      return false;
  return true;
}

LossAndGradients loss_and_gradients(const QNetwork& net, const Eigen::MatrixXd& states,
                                    std::span<const int> actions, std::span<const double> targets) {
  LossAndGradients out;
  out.loss = loss_and_gradients(net, states, actions, targets, out.gradients);
  return out;
}

double loss_and_gradients(const QNetwork& net, const Eigen::MatrixXd& states,
                          std::span<const int> actions, std::span<const double> targets,
                          Gradients& grads) {
  const Eigen::Index batch = states.cols();
  if (batch == 0) throw std::invalid_argument("minibatch must be nonempty");
  if (static_cast<Eigen::Index>(actions.size()) != batch ||
      static_cast<Eigen::Index>(targets.size()) != batch)
    throw std::invalid_argument("actions/targets must match the batch size");
  if (states.rows() != net.input_size()) throw std::invalid_argument("state dimension mismatch");

  const auto& layers = net.layers();
  const std::size_t depth = layers.size();

  // Identical states share activations, so the backward pass runs once per
  // distinct column with the per-sample output deltas summed into it.
  std::vector<Eigen::Index> column_of(static_cast<std::size_t>(batch));
  std::vector<Eigen::Index> distinct;
  for (Eigen::Index b = 0; b < batch; ++b) {
    Eigen::Index match = -1;
    for (std::size_t u = 0; u < distinct.size() && match < 0; ++u)
      if (states.col(distinct[u]) == states.col(b)) match = static_cast<Eigen::Index>(u);
    if (match < 0) {
      match = static_cast<Eigen::Index>(distinct.size());
      distinct.push_back(b);
    }
    column_of[static_cast<std::size_t>(b)] = match;
  }
  const auto unique = static_cast<Eigen::Index>(distinct.size());
  Eigen::MatrixXd inputs(states.rows(), unique);
  for (Eigen::Index u = 0; u < unique; ++u) inputs.col(u) = states.col(distinct[static_cast<std::size_t>(u)]);

  // activations[0] is the input; pre[k] is layer k's pre-activation.
  std::vector<Eigen::MatrixXd> activations{inputs};
  std::vector<Eigen::MatrixXd> pre;
  for (std::size_t k = 0; k < depth; ++k) {
    Eigen::MatrixXd z = layers[k].weight * activations.back();
    z.colwise() += layers[k].bias;
    pre.push_back(z);
    activations.push_back(k + 1 < depth ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z);
  }

  const Eigen::MatrixXd& q = activations.back();
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), unique);
  double loss = 0.0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const int a = actions[static_cast<std::size_t>(b)];
    if (a < 0 || a >= q.rows()) throw std::out_of_range("action index out of range");
    const Eigen::Index c = column_of[static_cast<std::size_t>(b)];
    const double err = q(a, c) - targets[static_cast<std::size_t>(b)];
    loss += err * err;
    delta(a, c) += 2.0 * err / static_cast<double>(batch);
  }
  loss /= static_cast<double>(batch);

  grads.resize(depth);
  for (std::size_t k = depth; k-- > 0;) {
    grads[k].weight.resize(layers[k].weight.rows(), layers[k].weight.cols());
    grads[k].weight.noalias() = delta * activations[k].transpose();
    grads[k].bias = delta.rowwise().sum();
    if (k > 0) {
      Eigen::MatrixXd back = layers[k].weight.transpose() * delta;
      delta = back.cwiseProduct((pre[k - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

double td_target(double reward, const Eigen::VectorXd& next_state, const QNetwork& target,
                 double gamma) {
  return reward + gamma * target.forward(next_state).maxCoeff();
}

RmsProp::RmsProp(const QNetwork& shape, double learning_rate, double decay, double delta)
    : learning_rate_(learning_rate), decay_(decay), delta_(delta) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (!(decay >= 0.0 && decay < 1.0)) throw std::invalid_argument("RMSProp decay must lie in [0, 1)");
  if (!(delta > 0.0)) throw std::invalid_argument("RMSProp delta must be > 0");
  for (const auto& l : shape.layers())
    mean_square_.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                            Eigen::VectorXd::Zero(l.bias.size())});
}

void RmsProp::reset() {
  for (auto& l : mean_square_) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

void RmsProp::step(QNetwork& net, const Gradients& grads) {
  auto& layers = net.layers();
  if (grads.size() != layers.size() || mean_square_.size() != layers.size())
    throw std::invalid_argument("gradient shape mismatch");
  auto update = [&](auto& param, const auto& g, auto& v) {
    v.array() = decay_ * v.array() + (1.0 - decay_) * g.array().square();
    param.array() -= learning_rate_ * g.array() / (v.array().sqrt() + delta_);
  };
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (grads[k].weight.rows() != layers[k].weight.rows() ||
        grads[k].weight.cols() != layers[k].weight.cols())
      throw std::invalid_argument("gradient shape mismatch");
    update(layers[k].weight, grads[k].weight, mean_square_[k].weight);
    update(layers[k].bias, grads[k].bias, mean_square_[k].bias);
  }
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be >= 1");
  items_.reserve(capacity);
}

void ReplayMemory::push(const Transition& t) {
  if (items_.size() < capacity_) {
    items_.push_back(t);
  } else {
    items_[next_] = t;
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t batch,
                                                      std::mt19937_64& rng) const {
  const std::size_t n = items_.size();
  const std::size_t k = std::min(batch, n);
  // Floyd's algorithm.
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> u(0, j);
    const std::size_t t = u(rng);
    bool seen = false;
    for (std::size_t p : picked)
      if (p == t) {
        seen = true;
        break;
      }
    picked.push_back(seen ? j : t);
  }
  return picked;
}

Eigen::VectorXd encode_state(std::uint64_t key, int width) {
  Eigen::VectorXd v(width);
  for (int i = 0; i < width; ++i) v(i) = ((key >> i) & 1u) ? 1.0 : 0.0;
  return v;
}

namespace {

constexpr char kMagic[8] = {'U', 'D', 'N', 'Q', 'N', 'E', 'T', '1'};

static_assert(std::endian::native == std::endian::little, "checkpoints assume little-endian");

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

}  // namespace

void save_networks(const std::filesystem::path& path, std::span<const QNetwork> networks) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(networks.size()));
  for (const auto& net : networks) {
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (int s : net.layer_sizes()) write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s));
    for (const auto& l : net.layers()) {
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) write_pod<double>(os, l.weight(r, c));
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) write_pod<double>(os, l.bias(r));
    }
  }
  if (!os) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

std::vector<QNetwork> load_networks(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path.string());
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a Q-network checkpoint: " + path.string());
  const auto count = read_pod<std::uint32_t>(is);
  std::vector<QNetwork> out;
  for (std::uint32_t n = 0; n < count; ++n) {
    const auto depth = read_pod<std::uint32_t>(is);
    if (depth < 2 || depth > 64) throw std::runtime_error("corrupt checkpoint layer count");
    std::vector<int> sizes;
    for (std::uint32_t k = 0; k < depth; ++k) sizes.push_back(static_cast<int>(read_pod<std::uint32_t>(is)));
    QNetwork net(sizes);
    for (auto& l : net.layers()) {
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = read_pod<double>(is);
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = read_pod<double>(is);
    }
    out.push_back(std::move(net));
  }
  return out;
}

}  // namespace udn
