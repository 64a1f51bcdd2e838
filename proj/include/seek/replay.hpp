#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seek/mlp.hpp"
#include "seek/rng.hpp"

namespace seek {

/// Fixed-capacity ring of transitions with uniform sampling (with
/// replacement).
template <class T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
    data_.reserve(capacity);
  }

  void push(const Transition<T>& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[cursor_] = t;
    }
    cursor_ = (cursor_ + 1) % capacity_;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t cursor() const { return cursor_; }
  const Transition<T>& operator[](std::size_t i) const { return data_[i]; }

  std::size_t sample_index(Rng& rng) const { return static_cast<std::size_t>(rng.index(data_.size())); }

  /// Fills `out` with `batch` uniformly drawn transitions.
  void sample(std::size_t batch, Rng& rng, std::vector<Transition<T>>& out) const {
    if (data_.size() < batch) throw std::logic_error("ReplayBuffer: fewer transitions than batch size");
    out.resize(batch);
    for (auto& t : out) t = data_[sample_index(rng)];
  }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition<T>> data_;
};

}  // namespace seek
