#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isodepth/core.hpp"
#include "isodepth/rng.hpp"

namespace isodepth {

// Absorbing Markov chain over the (leftmost, rightmost) span of the tree node
// containing a target point. States are pairs (l, r) with l <= i <= r
// (1-based), indexed lexicographically; the walk starts at (1, n) and is
// absorbed at (i, i) when the target is isolated. The number of steps to
// absorption is distributed exactly like the target's isolation depth.
class WalkChain {
 public:
  WalkChain(SortedSample1D sample, std::size_t target);

  const SortedSample1D& sample() const { return sample_; }
  std::size_t target() const { return target_; }

  std::size_t state_count() const { return target_ * (sample_.size() - target_ + 1); }
  std::size_t state_index(std::size_t l, std::size_t r) const;
  std::pair<std::size_t, std::size_t> state_at(std::size_t idx) const;
  std::size_t initial_state() const { return state_index(1, sample_.size()); }
  std::size_t absorbing_state() const { return state_index(target_, target_); }

  // Row-major row-stochastic matrix, state_count() x state_count().
  const std::vector<double>& matrix() const { return transitions_; }
  double probability(std::size_t from, std::size_t to) const {
    return transitions_[from * state_count() + to];
  }

 private:
  SortedSample1D sample_;
  std::size_t target_;
  std::vector<double> transitions_;
};

WalkChain build_chain(const SortedSample1D& s, std::size_t i);

// Pr[absorbed within xi steps] = (P^xi)[initial, absorbing], computed by
// repeated vector-matrix products.
double absorption_cdf(const WalkChain& chain, std::size_t xi);

// Expected steps to absorption via the tail sum E[h] = sum_{xi>=0} Pr[h>xi];
// the series is exact by xi = n-1, where absorption is certain.
double expected_steps(const WalkChain& chain);

struct WalkTrajectory {
  std::vector<std::pair<std::size_t, std::size_t>> states;  // starts (1,n), ends (i,i)
  std::size_t steps() const { return states.size() - 1; }
};

// Samples one trajectory by drawing splits uniformly on the current span,
// exactly as a tree build would.
WalkTrajectory simulate_walk(const SortedSample1D& s, std::size_t i, Rng& rng);

nlohmann::json chain_to_json(const WalkChain& chain);

}  // namespace isodepth
