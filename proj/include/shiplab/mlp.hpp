#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shiplab/rng.hpp"

namespace shiplab {

/// One dense layer; W is (out x in), applied as z = x W^T + b.
struct Layer {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
};

enum class OutputKind {
  linear,       ///< identity output (critic)
  tanh_scaled,  ///< scale * tanh(z) (actor, scale = rudder limit)
};

/// Dense feed-forward net with tanh hidden layers and either a linear or a
/// scaled-tanh output. Batches are row-per-sample matrices. All evaluation
/// and gradient arithmetic is plain Eigen with a fixed reduction order, so
/// results are bit-reproducible for a given input.
class Mlp {
 public:
  Mlp() = default;

  /// Zero-initialized network with the given layer widths
  /// (input, hidden..., output).
  Mlp(std::vector<int> sizes, OutputKind kind, double output_scale = 1.0);

  /// Uniform init in +-1/sqrt(fan_in) per layer. When final_layer_range > 0
  /// the output layer uses that range instead (small values keep the initial
  /// policy near zero). Draw order is fixed: per layer, W row-major, then b.
  static Mlp random_init(std::vector<int> sizes, OutputKind kind,
                         double output_scale, RngStream& rng,
                         double final_layer_range = 0.0);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  OutputKind output_kind() const { return kind_; }
  double output_scale() const { return output_scale_; }

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  /// Activations kept from a forward pass for backprop. act[0] is the input;
  /// act[i] is the output of layer i (post-activation).
  struct Cache {
    std::vector<Eigen::MatrixXd> act;
  };

  /// Feed-forward evaluation; input is (batch x input_size). Throws
  /// std::invalid_argument on a dimension mismatch.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache& cache) const;

  /// Reverse-mode gradients. dloss_doutput must match the forward output
  /// shape; any scaling by batch size belongs to the caller's loss. Returns
  /// parameter gradients (summed over the batch) plus the gradient with
  /// respect to the input rows.
  struct Grads {
    std::vector<Layer> layers;
    Eigen::MatrixXd input;
  };
  Grads backward(const Cache& cache, const Eigen::MatrixXd& dloss_doutput) const;

  bool finite() const;

  bool same_architecture(const Mlp& other) const {
    return sizes_ == other.sizes_ && kind_ == other.kind_ &&
           output_scale_ == other.output_scale_;
  }

 private:
  std::vector<int> sizes_;
  std::vector<Layer> layers_;
  OutputKind kind_ = OutputKind::linear;
  double output_scale_ = 1.0;
};

}  // namespace shiplab
