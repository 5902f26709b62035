#include "shiplab/replay_buffer.hpp"

#include <stdexcept>

namespace shiplab {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0)
    throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
  data_.reserve(capacity);
}

void ReplayBuffer::push(const Transition& t) {
  if (data_.size() < capacity_) {
    data_.push_back(t);
  } else {
    data_[next_] = t;
    next_ = (next_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
  if (data_.size() < capacity_) return data_[i];
  return data_[(next_ + i) % capacity_];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch,
                                             RngStream& rng) const {
  if (data_.size() < batch)
    throw std::logic_error("ReplayBuffer::sample: buffer holds " +
                           std::to_string(data_.size()) +
                           " transitions, need " + std::to_string(batch));
  std::vector<Transition> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i)
    out.push_back(data_[rng.uniform_index(data_.size())]);
  return out;
}

}  // namespace shiplab
