#pragma once

#include "lev/rng.hpp"
#include "lev/simplex.hpp"

namespace lev {

// Size-k uniform reservoir over a stream of loss vectors. The message passed
// to the optimistic update is the average of the stored samples.
class Reservoir {
 public:
  explicit Reservoir(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("Reservoir: capacity must be >= 1");
    samples_.reserve(static_cast<std::size_t>(capacity));
  }

  void observe(const Vec& loss, Rng& rng) {
    ++seen_;
    if (static_cast<long>(samples_.size()) < capacity_) {
      samples_.push_back(loss);
      return;
    }
    // Keep with probability k/seen, evicting a uniform slot.
    std::uint64_t j = rng.uniform_index(static_cast<std::uint64_t>(seen_));
    if (j < static_cast<std::uint64_t>(capacity_)) samples_[j] = loss;
  }

  bool empty() const { return samples_.empty(); }
  long seen() const { return seen_; }
  long size() const { return static_cast<long>(samples_.size()); }
  int capacity() const { return capacity_; }

  // Zero vector (of the given dimension) before any observation.
  Vec mean_or_zero(int dim) const {
    Vec m(static_cast<std::size_t>(dim), 0.0);
    if (samples_.empty()) return m;
    for (const Vec& s : samples_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += s[i];
    }
    for (double& mi : m) mi /= static_cast<double>(samples_.size());
    return m;
  }

 private:
  int capacity_;
  long seen_ = 0;
  std::vector<Vec> samples_;
};

}  // namespace lev
