#include "isodepth/forest.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace isodepth {

std::size_t ITree::leaf_count() const {
  std::size_t count = 0;
  for (const auto& node : nodes_) {
    if (node.split_attribute < 0) ++count;
  }
  return count;
}

std::size_t ITree::depth(std::span<const double> point) const {
  std::size_t d = 0;
  std::int32_t at = 0;
  while (nodes_[at].split_attribute >= 0) {
    const Node& node = nodes_[at];
    if (static_cast<std::size_t>(node.split_attribute) >= point.size()) {
      throw DimensionMismatch(static_cast<std::size_t>(node.split_attribute) + 1, point.size());
    }
    at = point[node.split_attribute] <= node.split_value ? node.left : node.right;
    ++d;
  }
  return d;
}

namespace {

struct TreeBuilder {
  const Dataset& data;
  Rng& rng;
  std::vector<ITree::Node> nodes;
  std::vector<std::size_t> idx;  // permuted point indices; nodes own [begin, end)
  // Scratch reused across nodes; fully consumed before recursing.
  std::vector<std::size_t> candidates;
  std::vector<double> mins;
  std::vector<double> maxs;

  std::int32_t build(std::size_t begin, std::size_t end) {
    const auto self = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    if (end - begin <= 1) return self;

    // Candidate attributes: columns with more than one distinct value here.
    const std::size_t d = data.d();
    std::size_t chosen = 0;
    double lo = 0.0;
    double hi = 0.0;
    if (d == 1) {
      lo = hi = data.at(idx[begin], 0);
      for (std::size_t t = begin + 1; t < end; ++t) {
        const double v = data.at(idx[t], 0);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
      if (!(hi > lo)) return self;  // all rows identical: leaf
    } else {
      candidates.clear();
      mins.resize(d);
      maxs.resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        double mn = data.at(idx[begin], j);
        double mx = mn;
        for (std::size_t t = begin + 1; t < end; ++t) {
          const double v = data.at(idx[t], j);
          if (v < mn) mn = v;
          if (v > mx) mx = v;
        }
        mins[j] = mn;
        maxs[j] = mx;
        if (mx > mn) candidates.push_back(j);
      }
      if (candidates.empty()) return self;  // all rows identical: leaf
      chosen = candidates[rng.uniform_index(candidates.size())];
      lo = mins[chosen];
      hi = maxs[chosen];
    }

    // Uniform split on [lo, hi]; s == hi would empty the right side, redraw.
    double split = 0.5 * (lo + hi);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double draw = rng.uniform(lo, hi);
      if (draw < hi) {
        split = draw;
        break;
      }
    }

    const auto mid_it =
        std::partition(idx.begin() + begin, idx.begin() + end,
                       [&](std::size_t p) { return data.at(p, chosen) <= split; });
    const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes[self].split_attribute = static_cast<std::int32_t>(chosen);
    nodes[self].split_value = split;
    nodes[self].left = left;
    nodes[self].right = right;
    return self;
  }
};

ITree build_tree_on(const Dataset& data, std::span<const std::size_t> rows, Rng& rng) {
  TreeBuilder builder{data, rng, {}, {rows.begin(), rows.end()}, {}, {}, {}};
  builder.nodes.reserve(2 * rows.size());
  builder.build(0, rows.size());
  return ITree(std::move(builder.nodes));
}

}  // namespace

ITree build_tree(const Dataset& data, Rng& rng) {
  std::vector<std::size_t> rows(data.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return build_tree_on(data, rows, rng);
}

Rng tree_stream(std::uint64_t base_seed, std::size_t tree_index) {
  return Rng::for_stream(base_seed, tree_index);
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t psi, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (psi >= n) return idx;
  // Partial Fisher-Yates; only the first psi slots are consumed.
  for (std::size_t t = 0; t < psi; ++t) {
    const std::size_t pick = t + rng.uniform_index(n - t);
    std::swap(idx[t], idx[pick]);
  }
  idx.resize(psi);
  return idx;
}

Forest fit_forest(const Dataset& data, std::size_t M, std::size_t psi, std::uint64_t seed,
                  unsigned threads) {
  if (M < 1) throw InvalidParams("tree count M must be >= 1");
  if (psi < 1) throw InvalidParams("subsample size psi must be >= 1");

  std::vector<ITree> trees(M);
  const auto build_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t m = first; m < last; ++m) {
      Rng rng = tree_stream(seed, m);
      const auto rows = subsample_indices(data.n(), psi, rng);
      trees[m] = build_tree_on(data, rows, rng);
    }
  };

  unsigned worker_count = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (worker_count < 1) worker_count = 1;
  worker_count = static_cast<unsigned>(std::min<std::size_t>(worker_count, M));
  if (worker_count == 1) {
    build_range(0, M);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (M + worker_count - 1) / worker_count;
    for (unsigned w = 0; w < worker_count; ++w) {
      const std::size_t first = w * chunk;
      const std::size_t last = std::min(M, first + chunk);
      if (first >= last) break;
      workers.emplace_back(build_range, first, last);
    }
    for (auto& worker : workers) worker.join();
  }
  return Forest(std::move(trees), psi, seed, data.n(), data.d());
}

double score(const Forest& forest, std::span<const double> point) {
  if (point.size() != forest.dim()) throw DimensionMismatch(forest.dim(), point.size());
  std::size_t total = 0;
  for (const auto& tree : forest.trees()) total += tree.depth(point);
  return static_cast<double>(total) / static_cast<double>(forest.trees().size());
}

std::vector<double> score_all(const Forest& forest, const Dataset& data, unsigned threads) {
  if (data.d() != forest.dim()) throw DimensionMismatch(forest.dim(), data.d());
  std::vector<double> out(data.n());
  const auto score_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) out[i] = score(forest, data.row(i));
  };
  unsigned worker_count = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (worker_count < 1) worker_count = 1;
  worker_count = static_cast<unsigned>(std::min<std::size_t>(worker_count, data.n()));
  if (worker_count <= 1) {
    score_range(0, data.n());
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (data.n() + worker_count - 1) / worker_count;
    for (unsigned w = 0; w < worker_count; ++w) {
      const std::size_t first = w * chunk;
      const std::size_t last = std::min(data.n(), first + chunk);
      if (first >= last) break;
      workers.emplace_back(score_range, first, last);
    }
    for (auto& worker : workers) worker.join();
  }
  return out;
}

namespace {

nlohmann::json node_to_json(const ITree& tree, std::int32_t at) {
  const auto& node = tree.nodes()[at];
  if (node.split_attribute < 0) return nlohmann::json{{"leaf", true}};
  nlohmann::json j;
  j["attr"] = node.split_attribute;
  j["split"] = node.split_value;
  j["left"] = node_to_json(tree, node.left);
  j["right"] = node_to_json(tree, node.right);
  return j;
}

std::int32_t node_from_json(const nlohmann::json& j, std::vector<ITree::Node>& nodes) {
  const auto self = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  if (j.contains("leaf")) return self;
  nodes[self].split_attribute = j.at("attr").get<std::int32_t>();
  nodes[self].split_value = j.at("split").get<double>();
  const std::int32_t left = node_from_json(j.at("left"), nodes);
  const std::int32_t right = node_from_json(j.at("right"), nodes);
  nodes[self].left = left;
  nodes[self].right = right;
  return self;
}

}  // namespace

nlohmann::json forest_to_json(const Forest& forest, const std::vector<std::string>& column_names) {
  nlohmann::json j;
  j["format"] = "isodepth-forest";
  j["version"] = 1;
  j["n_train"] = forest.n_train();
  j["dim"] = forest.dim();
  j["subsample_size"] = forest.subsample_size();
  j["base_seed"] = forest.base_seed();
  if (!column_names.empty()) j["column_names"] = column_names;
  auto trees = nlohmann::json::array();
  for (const auto& tree : forest.trees()) trees.push_back(node_to_json(tree, 0));
  j["trees"] = std::move(trees);
  return j;
}

Forest forest_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != "isodepth-forest") {
    throw IoError("not an isodepth forest document");
  }
  if (j.at("version").get<int>() != 1) throw IoError("unsupported forest version");
  std::vector<ITree> trees;
  for (const auto& tj : j.at("trees")) {
    std::vector<ITree::Node> nodes;
    node_from_json(tj, nodes);
    trees.emplace_back(std::move(nodes));
  }
  if (trees.empty()) throw IoError("forest document has no trees");
  return Forest(std::move(trees), j.at("subsample_size").get<std::size_t>(),
                j.at("base_seed").get<std::uint64_t>(), j.at("n_train").get<std::size_t>(),
                j.at("dim").get<std::size_t>());
}

}  // namespace isodepth
