#include "isodepth/knn.hpp"

#include <algorithm>
#include <numeric>

#include "isodepth/kernels.hpp"

namespace isodepth {
namespace {

// excluded < n skips that row; excluded == n skips one zero-distance
// candidate instead (a query that coincides with a training point).
double score_excluding(const Dataset& data, std::span<const double> point, const KnnConfig& cfg,
                       std::size_t excluded) {
  const std::size_t n = data.n();
  if (point.size() != data.d()) throw DimensionMismatch(data.d(), point.size());
  if (cfg.k < 1) throw InvalidParams("k must be >= 1");

  std::vector<std::pair<double, std::size_t>> dists;
  dists.reserve(n);
  bool zero_skipped = excluded < n;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == excluded) continue;
    const double dist = kernels::l1_distance(point.data(), data.row(i).data(), data.d());
    if (!zero_skipped && cfg.exclude_self && dist == 0.0) {
      zero_skipped = true;
      continue;
    }
    dists.emplace_back(dist, i);
  }
  if (cfg.k > dists.size()) throw KTooLarge(cfg.k, dists.size());

  std::partial_sort(dists.begin(), dists.begin() + cfg.k, dists.end());
  double total = 0.0;
  for (std::size_t t = 0; t < cfg.k; ++t) total += dists[t].first;
  return total / static_cast<double>(cfg.k);
}

}  // namespace

double knn_score(const Dataset& data, std::span<const double> point, const KnnConfig& cfg) {
  return score_excluding(data, point, cfg, data.n());
}

std::vector<double> knn_scores_training(const Dataset& data, const KnnConfig& cfg) {
  std::vector<double> scores(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    scores[i] = score_excluding(data, data.row(i), cfg, cfg.exclude_self ? i : data.n());
  }
  return scores;
}

std::vector<std::size_t> rank_by_knn(const Dataset& data, const KnnConfig& cfg, std::size_t m) {
  if (m < 1 || m > data.n()) throw IndexOutOfBounds("rank count " + std::to_string(m));
  const auto scores = knn_scores_training(data, cfg);
  std::vector<std::size_t> order(data.n());
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores[a - 1];
    const double sb = scores[b - 1];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  order.resize(m);
  return order;
}

}  // namespace isodepth
