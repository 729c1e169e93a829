#include "isodepth/walk.hpp"

#include <algorithm>

#include "isodepth/kernels.hpp"

namespace isodepth {

WalkChain::WalkChain(SortedSample1D sample, std::size_t target)
    : sample_(std::move(sample)), target_(target) {
  const std::size_t n = sample_.size();
  if (n < 2) throw NotEnoughPoints("walk chain needs n >= 2");
  if (target_ < 1 || target_ > n) throw IndexOutOfBounds("target " + std::to_string(target_));

  const auto& xs = sample_.values();
  const std::size_t count = state_count();
  transitions_.assign(count * count, 0.0);

  for (std::size_t l = 1; l <= target_; ++l) {
    for (std::size_t r = target_; r <= n; ++r) {
      const std::size_t from = state_index(l, r);
      if (l == target_ && r == target_) {
        transitions_[from * count + from] = 1.0;  // absorbing
        continue;
      }
      const double span = xs[r - 1] - xs[l - 1];
      // Split below the target shrinks from the left: (l, r) -> (l', r) with
      // probability gap(l'-1)/span for l < l' <= i.
      for (std::size_t lp = l + 1; lp <= target_; ++lp) {
        transitions_[from * count + state_index(lp, r)] = sample_.gap(lp - 1) / span;
      }
      // Split above the target shrinks from the right: (l, r) -> (l, r') with
      // probability gap(r')/span for i <= r' < r.
      for (std::size_t rp = target_; rp < r; ++rp) {
        transitions_[from * count + state_index(l, rp)] = sample_.gap(rp) / span;
      }
    }
  }
}

std::size_t WalkChain::state_index(std::size_t l, std::size_t r) const {
  const std::size_t n = sample_.size();
  if (l < 1 || l > target_ || r < target_ || r > n) {
    throw IndexOutOfBounds("state (" + std::to_string(l) + ", " + std::to_string(r) + ")");
  }
  return (l - 1) * (n - target_ + 1) + (r - target_);
}

std::pair<std::size_t, std::size_t> WalkChain::state_at(std::size_t idx) const {
  const std::size_t width = sample_.size() - target_ + 1;
  return {idx / width + 1, idx % width + target_};
}

WalkChain build_chain(const SortedSample1D& s, std::size_t i) { return WalkChain(s, i); }

namespace {

// One step of v <- v P, skipping zero entries of v (v is sparse early on).
void step(const WalkChain& chain, std::vector<double>& v, std::vector<double>& scratch) {
  const std::size_t count = chain.state_count();
  const auto& P = chain.matrix();
  scratch.assign(count, 0.0);
  for (std::size_t from = 0; from < count; ++from) {
    if (v[from] != 0.0) {
      kernels::axpy(scratch.data(), P.data() + from * count, v[from], count);
    }
  }
  v.swap(scratch);
}

}  // namespace

double absorption_cdf(const WalkChain& chain, std::size_t xi) {
  std::vector<double> v(chain.state_count(), 0.0);
  v[chain.initial_state()] = 1.0;
  std::vector<double> scratch;
  for (std::size_t t = 0; t < xi; ++t) step(chain, v, scratch);
  return v[chain.absorbing_state()];
}

double expected_steps(const WalkChain& chain) {
  const std::size_t n = chain.sample().size();
  std::vector<double> v(chain.state_count(), 0.0);
  v[chain.initial_state()] = 1.0;
  std::vector<double> scratch;
  double total = 0.0;
  for (std::size_t xi = 0; xi + 1 < n; ++xi) {
    if (xi > 0) step(chain, v, scratch);
    total += 1.0 - v[chain.absorbing_state()];
  }
  return total;
}

WalkTrajectory simulate_walk(const SortedSample1D& s, std::size_t i, Rng& rng) {
  const std::size_t n = s.size();
  if (n < 2) throw NotEnoughPoints("walk simulation needs n >= 2");
  if (i < 1 || i > n) throw IndexOutOfBounds("target " + std::to_string(i));
  const auto& xs = s.values();

  WalkTrajectory traj;
  std::size_t l = 1;
  std::size_t r = n;
  traj.states.emplace_back(l, r);
  while (l != i || r != i) {
    const double lo = xs[l - 1];
    const double hi = xs[r - 1];
    double split = 0.5 * (lo + hi);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double draw = rng.uniform(lo, hi);
      if (draw < hi) {
        split = draw;
        break;
      }
    }
    // Points <= split go left; locate the gap the split fell into.
    const auto it = std::upper_bound(xs.begin() + (l - 1), xs.begin() + r, split);
    const std::size_t cut = static_cast<std::size_t>(it - xs.begin());  // first index > split
    if (cut >= i) {
      r = cut;  // target stays in the left node
    } else {
      l = cut + 1;  // target stays in the right node
    }
    traj.states.emplace_back(l, r);
  }
  return traj;
}

nlohmann::json chain_to_json(const WalkChain& chain) {
  nlohmann::json j;
  j["format"] = "isodepth-walk-chain";
  j["version"] = 1;
  j["target"] = chain.target();
  j["values"] = chain.sample().values();
  auto states = nlohmann::json::array();
  for (std::size_t idx = 0; idx < chain.state_count(); ++idx) {
    const auto [l, r] = chain.state_at(idx);
    states.push_back({l, r});
  }
  j["states"] = states;
  auto rows = nlohmann::json::array();
  for (std::size_t from = 0; from < chain.state_count(); ++from) {
    auto row = nlohmann::json::array();
    for (std::size_t to = 0; to < chain.state_count(); ++to) {
      row.push_back(chain.probability(from, to));
    }
    rows.push_back(std::move(row));
  }
  j["matrix"] = rows;
  j["initial_state"] = chain.initial_state();
  j["absorbing_state"] = chain.absorbing_state();
  j["expected_steps"] = expected_steps(chain);
  return j;
}

}  // namespace isodepth
