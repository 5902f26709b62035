#pragma once

#include "shiplab/mlp.hpp"

namespace shiplab {

struct AdamConfig {
  double lr = 0.0008;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

/// First/second moment estimates mirroring a network's parameter shapes,
/// plus the bias-correction step counter.
struct AdamState {
  std::vector<Layer> m;
  std::vector<Layer> v;
  long t = 0;

  static AdamState like(const Mlp& net);
};

/// One Adam update in place: params -= lr * m_hat / (sqrt(v_hat) + eps).
/// Throws std::invalid_argument when gradient or moment shapes do not match
/// the network.
void adam_step(Mlp& net, const std::vector<Layer>& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace shiplab
