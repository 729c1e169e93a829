#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "isodepth/core.hpp"
#include "isodepth/rng.hpp"

namespace isodepth {

// Isolation tree stored as a flat node arena; node 0 is the root. A node
// with split_attribute == -1 is a leaf.
class ITree {
 public:
  struct Node {
    std::int32_t split_attribute = -1;
    double split_value = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  ITree() = default;
  explicit ITree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t leaf_count() const;

  // Path length from the root to the leaf reached by `point`; a lone leaf is
  // depth 0.
  std::size_t depth(std::span<const double> point) const;

 private:
  std::vector<Node> nodes_;
};

// One tree over the full dataset, consuming `rng` (Algorithm: pick a random
// attribute among those with more than one distinct value, pick a split
// uniformly on its [min, max], route <= left, recurse until singletons).
// A split that lands exactly on the column max would leave the right side
// empty; it is redrawn (up to 64 times, then the midpoint is used).
ITree build_tree(const Dataset& data, Rng& rng);

class Forest {
 public:
  Forest(std::vector<ITree> trees, std::size_t subsample_size, std::uint64_t base_seed,
         std::size_t n_train, std::size_t dim)
      : trees_(std::move(trees)),
        subsample_size_(subsample_size),
        base_seed_(base_seed),
        n_train_(n_train),
        dim_(dim) {}

  const std::vector<ITree>& trees() const { return trees_; }
  std::size_t subsample_size() const { return subsample_size_; }
  std::uint64_t base_seed() const { return base_seed_; }
  std::size_t n_train() const { return n_train_; }
  std::size_t dim() const { return dim_; }
};

// The deterministic per-tree stream used by fit_forest; exposed so the
// harness can replay a tree's subsample.
Rng tree_stream(std::uint64_t base_seed, std::size_t tree_index);

// Uniform without-replacement draw of min(psi, n) indices, consuming `rng`.
// psi >= n returns 0..n-1 untouched without consuming any draws.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t psi, Rng& rng);

// Builds M trees; tree m uses the stream derived from (seed, m), so the
// result is reproducible for any thread count and forests with the same seed
// share their leading trees. threads == 0 picks the hardware default.
Forest fit_forest(const Dataset& data, std::size_t M, std::size_t psi, std::uint64_t seed,
                  unsigned threads = 0);

// Average depth over the ensemble; lower = more anomalous.
double score(const Forest& forest, std::span<const double> point);

std::vector<double> score_all(const Forest& forest, const Dataset& data, unsigned threads = 0);

nlohmann::json forest_to_json(const Forest& forest,
                              const std::vector<std::string>& column_names = {});
Forest forest_from_json(const nlohmann::json& j);

}  // namespace isodepth
