#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isodepth/core.hpp"

namespace isodepth {

struct KnnConfig {
  std::size_t k = 1;
  // Skip the query's own copy when it is a dataset member; without this every
  // training score is dragged toward zero by the zero self-distance.
  bool exclude_self = true;
};

// Mean L1 distance to the k nearest candidates; higher = more anomalous.
// Ties at the k-th neighbor are broken by smaller index.
double knn_score(const Dataset& data, std::span<const double> point, const KnnConfig& cfg);

// Scores every training point, excluding its own row per cfg.
std::vector<double> knn_scores_training(const Dataset& data, const KnnConfig& cfg);

// Indices (1-based) of the m largest training scores, descending, ties broken
// by smaller index.
std::vector<std::size_t> rank_by_knn(const Dataset& data, const KnnConfig& cfg, std::size_t m);

}  // namespace isodepth
