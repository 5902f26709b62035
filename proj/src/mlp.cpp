#include "shiplab/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace shiplab {

Mlp::Mlp(std::vector<int> sizes, OutputKind kind, double output_scale)
    : sizes_(std::move(sizes)), kind_(kind), output_scale_(output_scale) {
  if (sizes_.size() < 2)
    throw std::invalid_argument("Mlp: need at least input and output sizes");
  for (int n : sizes_)
    if (n <= 0) throw std::invalid_argument("Mlp: layer sizes must be > 0");
  layers_.resize(sizes_.size() - 1);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].W = Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]);
    layers_[i].b = Eigen::VectorXd::Zero(sizes_[i + 1]);
  }
}

Mlp Mlp::random_init(std::vector<int> sizes, OutputKind kind,
                     double output_scale, RngStream& rng,
                     double final_layer_range) {
  Mlp net(std::move(sizes), kind, output_scale);
  for (std::size_t l = 0; l < net.layers_.size(); ++l) {
    Layer& layer = net.layers_[l];
    const bool last = l + 1 == net.layers_.size();
    const double range = (last && final_layer_range > 0.0)
                             ? final_layer_range
                             : 1.0 / std::sqrt(double(layer.W.cols()));
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c)
        layer.W(r, c) = rng.uniform(-range, range);
    for (Eigen::Index r = 0; r < layer.b.size(); ++r)
      layer.b(r) = rng.uniform(-range, range);
  }
  return net;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  Cache cache;
  return forward(input, cache);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache& cache) const {
  if (input.cols() != input_size())
    throw std::invalid_argument("Mlp::forward: input has " +
                                std::to_string(input.cols()) +
                                " columns, expected " +
                                std::to_string(input_size()));
  cache.act.clear();
  cache.act.reserve(layers_.size() + 1);
  cache.act.push_back(input);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    Eigen::MatrixXd z =
        (cache.act.back() * layer.W.transpose()).rowwise() +
        layer.b.transpose();
    const bool last = l + 1 == layers_.size();
    if (!last) {
      cache.act.push_back(z.array().tanh().matrix());
    } else if (kind_ == OutputKind::tanh_scaled) {
      cache.act.push_back((output_scale_ * z.array().tanh()).matrix());
    } else {
      cache.act.push_back(std::move(z));
    }
  }
  return cache.act.back();
}

Mlp::Grads Mlp::backward(const Cache& cache,
                         const Eigen::MatrixXd& dloss_doutput) const {
  if (cache.act.size() != layers_.size() + 1)
    throw std::invalid_argument("Mlp::backward: cache does not match network");
  if (dloss_doutput.rows() != cache.act.back().rows() ||
      dloss_doutput.cols() != cache.act.back().cols())
    throw std::invalid_argument("Mlp::backward: gradient shape mismatch");

  Grads grads;
  grads.layers.resize(layers_.size());

  Eigen::MatrixXd delta;  // dloss/dz of the current layer
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Eigen::MatrixXd& out = cache.act[i + 1];
    const bool last = i + 1 == layers_.size();
    if (last && kind_ == OutputKind::linear) {
      delta = dloss_doutput;
    } else if (last) {  // tanh_scaled: dout/dz = scale (1 - tanh^2)
      const Eigen::ArrayXXd t = out.array() / output_scale_;
      delta = (dloss_doutput.array() * output_scale_ * (1.0 - t.square()))
                  .matrix();
    } else {  // hidden tanh: dout/dz = 1 - out^2
      delta = (delta.array() * (1.0 - out.array().square())).matrix();
    }
    grads.layers[i].W = delta.transpose() * cache.act[i];
    grads.layers[i].b = delta.colwise().sum().transpose();
    if (i > 0)
      delta = (delta * layers_[i].W).eval();  // becomes dloss/dact of layer i-1
    else
      grads.input = delta * layers_[0].W;
  }
  return grads;
}

bool Mlp::finite() const {
  for (const Layer& layer : layers_)
    if (!layer.W.allFinite() || !layer.b.allFinite()) return false;
  return true;
}

}  // namespace shiplab
