#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "shiplab/rng.hpp"

namespace shiplab {

/// One environment interaction. Observations are the raw (unnormalized)
/// 4-vectors; the action is the commanded rudder angle in radians.
struct Transition {
  Eigen::Vector4d s;
  double a = 0.0;
  double r = 0.0;
  Eigen::Vector4d s_next;
  bool done = false;
};

/// Fixed-capacity ring buffer with first-in-first-out eviction. Index 0 is
/// always the oldest stored transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// Oldest-first access; throws std::out_of_range.
  const Transition& at(std::size_t i) const;

  /// Uniform sample with replacement. Throws std::logic_error when fewer
  /// than batch transitions are stored.
  std::vector<Transition> sample(std::size_t batch, RngStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;  ///< overwrite position once full
  std::vector<Transition> data_;
};

}  // namespace shiplab
