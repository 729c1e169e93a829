#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isodepth/core.hpp"

namespace isodepth {

enum class AnomalyKind {
  marginal_single,
  central_single,
  marginal_clustered,
  counterexample_marginal,
  counterexample_central,
  counterexample_clustered,
};

enum class Detector { iforest, knn };

const char* to_string(AnomalyKind kind);
const char* to_string(Detector detector);
AnomalyKind anomaly_kind_from_string(const std::string& name);
Detector detector_from_string(const std::string& name);

// One threshold decision: detection is predicted exactly when the observed
// anomaly gap strictly exceeds the threshold. `sufficient_only` marks
// predictors whose below-threshold outcome is "not guaranteed" rather than
// "not detected" (one-sided theorems).
struct ThresholdReport {
  AnomalyKind anomaly_type;
  Detector detector;
  double observed_gap = 0.0;  // theta
  double threshold = 0.0;
  bool detected = false;
  bool sufficient_only = false;
  std::string rule;  // human-readable threshold formula
  std::string note;  // regime warnings, if any
  DensityMetrics metrics;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  std::size_t k = 0;
  double calibration_c = 0.0;
};

// kappa >= sqrt(n+3) check over the full gap range.
struct AssumptionCheck {
  double kappa = 0.0;
  double bound = 0.0;
  bool pass = false;
};
AssumptionCheck verify_assumption(const SortedSample1D& s);

struct AssumptionColumn {
  std::string column;
  std::size_t n = 0;
  double kappa = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool valid = false;  // false when the column has repeated values or n < 3
};
struct AssumptionSummary {
  std::vector<AssumptionColumn> columns;
  std::size_t successful = 0;
  std::size_t valid = 0;
  std::size_t total = 0;
};
AssumptionSummary verify_assumption_batch(const Dataset& data);

// Threshold constants for the order-of-magnitude predictors. The exact
// theorems need no constant; these were fitted by a binary-search sweep of
// the flip point theta* against the exact depth oracle over a grid of
// n0/n1/kappa and rounded up (see docs/calibration notes in the README).
struct Calibration {
  int version = 1;
  double central_iforest_c = 1.2;    // threshold c * sqrt(n0 * kappa)
  double clustered_iforest_c = 1.5;  // threshold c * n1^2 * kappa
  double central_knn_c = 1.0;        // threshold c * k * delta (exact form preferred)
  double clustered_knn_c = 1.0;      // threshold c * k * delta
};
const Calibration& calibration();

// Marginal single anomaly, iForest: sufficient when gap > U * kappa; below
// the threshold detection is merely not guaranteed.
ThresholdReport predict_marginal_single_iforest(const DensityMetrics& metrics, double gap);

// Marginal single anomaly, k-NN: two-sided at gap > U + (k-1) * delta / 2.
ThresholdReport predict_marginal_single_knn(const DensityMetrics& metrics, double gap,
                                            std::size_t k);

// Central single anomaly; theta is the smaller of the two gaps flanking the
// anomaly; n0 must be even. iForest threshold c * sqrt(n0 * kappa); k-NN uses
// the exact bound (k+1)/2 * U - (k/2-1)/2 * L unless c is supplied.
ThresholdReport predict_central_single(Detector detector, const DensityMetrics& metrics,
                                       double theta, std::size_t n0, std::size_t k = 0,
                                       std::optional<double> c = std::nullopt);

// Marginal clustered anomalies; theta is the cluster-to-normal gap; n1 must
// be odd for the iForest variant. iForest threshold c * n1^2 * kappa; k-NN
// threshold c * k * delta with a warning when k <= n1.
ThresholdReport predict_marginal_clustered(Detector detector, const DensityMetrics& metrics,
                                           double theta, std::size_t n1, std::size_t k = 0,
                                           std::optional<double> c = std::nullopt);

struct CaseParams {
  std::size_t n = 0;   // total points (marginal_single, counterexample_marginal)
  std::size_t n0 = 0;  // normal count (central/clustered kinds)
  std::size_t n1 = 0;  // anomaly count (clustered kinds)
  double normal_gap_max = 1.0;  // U of the normal block
  double normal_gap_min = 1.0;  // L of the normal block (block alternates U, L, ...)
  double cluster_gap = 1.0;     // adjacent gap inside the anomaly cluster
  double anomaly_gap = 0.0;     // theta
  double epsilon = 0.0;         // counterexample_marginal excess; 0 = 0.01 * U
};

struct CaseDataset {
  AnomalyKind kind;
  SortedSample1D sample;
  std::vector<std::size_t> anomaly_indices;  // 1-based ground truth
};

// Deterministic gap-sequence constructions, anchored at 0:
//   marginal_single:          (theta, U, L, U, L, ...)
//   central_single:           (g ... g, theta, theta, g ... g), n0/2-1 each side
//   marginal_clustered:       (a ... a, theta, g ... g), n1-1 cluster gaps
//   counterexample_marginal:  (U + eps, U/2, U, ..., U)
//   counterexample_central:   unit-gap central_single
//   counterexample_clustered: unit-gap marginal_clustered
CaseDataset construct_case(AnomalyKind kind, const CaseParams& params);

nlohmann::json report_to_json(const ThresholdReport& report);

}  // namespace isodepth
