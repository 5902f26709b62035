#include "shiplab/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace shiplab {

AdamState AdamState::like(const Mlp& net) {
  AdamState state;
  state.m.resize(net.layers().size());
  state.v.resize(net.layers().size());
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const Layer& layer = net.layers()[i];
    state.m[i].W = Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols());
    state.m[i].b = Eigen::VectorXd::Zero(layer.b.size());
    state.v[i] = state.m[i];
  }
  return state;
}

void adam_step(Mlp& net, const std::vector<Layer>& grads, AdamState& state,
               const AdamConfig& cfg) {
  if (grads.size() != net.layers().size() ||
      state.m.size() != net.layers().size())
    throw std::invalid_argument("adam_step: layer count mismatch");

  ++state.t;
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(state.t));

  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    Layer& layer = net.layers()[i];
    const Layer& g = grads[i];
    if (g.W.rows() != layer.W.rows() || g.W.cols() != layer.W.cols() ||
        g.b.size() != layer.b.size())
      throw std::invalid_argument("adam_step: gradient shape mismatch");

    Layer& m = state.m[i];
    Layer& v = state.v[i];
    m.W = cfg.beta1 * m.W + (1.0 - cfg.beta1) * g.W;
    m.b = cfg.beta1 * m.b + (1.0 - cfg.beta1) * g.b;
    v.W = (cfg.beta2 * v.W.array() + (1.0 - cfg.beta2) * g.W.array().square())
              .matrix();
    v.b = (cfg.beta2 * v.b.array() + (1.0 - cfg.beta2) * g.b.array().square())
              .matrix();
    layer.W.array() -=
        cfg.lr * (m.W.array() / bc1) / ((v.W.array() / bc2).sqrt() + cfg.eps);
    layer.b.array() -=
        cfg.lr * (m.b.array() / bc1) / ((v.b.array() / bc2).sqrt() + cfg.eps);
  }
}

}  // namespace shiplab
