#include "isodepth/casestudy.hpp"

#include <cmath>
#include <numeric>

namespace isodepth {

const char* to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::marginal_single: return "marginal_single";
    case AnomalyKind::central_single: return "central_single";
    case AnomalyKind::marginal_clustered: return "marginal_clustered";
    case AnomalyKind::counterexample_marginal: return "counterexample_marginal";
    case AnomalyKind::counterexample_central: return "counterexample_central";
    case AnomalyKind::counterexample_clustered: return "counterexample_clustered";
  }
  return "?";
}

const char* to_string(Detector detector) {
  return detector == Detector::iforest ? "iforest" : "knn";
}

AnomalyKind anomaly_kind_from_string(const std::string& name) {
  for (auto kind : {AnomalyKind::marginal_single, AnomalyKind::central_single,
                    AnomalyKind::marginal_clustered, AnomalyKind::counterexample_marginal,
                    AnomalyKind::counterexample_central, AnomalyKind::counterexample_clustered}) {
    if (name == to_string(kind)) return kind;
  }
  throw InvalidParams("unknown anomaly kind '" + name + "'");
}

Detector detector_from_string(const std::string& name) {
  if (name == "iforest") return Detector::iforest;
  if (name == "knn") return Detector::knn;
  throw InvalidParams("unknown detector '" + name + "'");
}

AssumptionCheck verify_assumption(const SortedSample1D& s) {
  if (s.size() < 3) throw NotEnoughPoints("assumption check needs n >= 3");
  const DensityMetrics m = density_metrics(s);
  AssumptionCheck check;
  check.kappa = m.kappa;
  check.bound = std::sqrt(static_cast<double>(s.size()) + 3.0);
  check.pass = check.kappa >= check.bound;
  return check;
}

AssumptionSummary verify_assumption_batch(const Dataset& data) {
  AssumptionSummary summary;
  summary.total = data.d();
  for (std::size_t j = 0; j < data.d(); ++j) {
    AssumptionColumn col;
    col.column = data.column_names()[j];
    col.n = data.n();
    try {
      const SortedSample1D s = sort_and_validate(data.column(j));
      const AssumptionCheck check = verify_assumption(s);
      col.kappa = check.kappa;
      col.bound = check.bound;
      col.pass = check.pass;
      col.valid = true;
    } catch (const DuplicateValue&) {
      col.valid = false;
    } catch (const NotEnoughPoints&) {
      col.valid = false;
    }
    summary.valid += col.valid ? 1 : 0;
    summary.successful += (col.valid && col.pass) ? 1 : 0;
    summary.columns.push_back(std::move(col));
  }
  return summary;
}

const Calibration& calibration() {
  static const Calibration c;
  return c;
}

ThresholdReport predict_marginal_single_iforest(const DensityMetrics& metrics, double gap) {
  ThresholdReport r;
  r.anomaly_type = AnomalyKind::marginal_single;
  r.detector = Detector::iforest;
  r.observed_gap = gap;
  r.threshold = metrics.max_gap * metrics.kappa;
  r.detected = gap > r.threshold;
  r.sufficient_only = true;
  r.rule = "U * kappa";
  if (!r.detected) r.note = "below threshold: detection not guaranteed";
  r.metrics = metrics;
  return r;
}

ThresholdReport predict_marginal_single_knn(const DensityMetrics& metrics, double gap,
                                            std::size_t k) {
  if (k < 1) throw InvalidParams("k must be >= 1");
  ThresholdReport r;
  r.anomaly_type = AnomalyKind::marginal_single;
  r.detector = Detector::knn;
  r.observed_gap = gap;
  r.threshold = metrics.max_gap + static_cast<double>(k - 1) * metrics.delta / 2.0;
  r.detected = gap > r.threshold;
  r.sufficient_only = false;
  r.rule = "U + (k-1) * delta / 2";
  r.metrics = metrics;
  r.k = k;
  return r;
}

ThresholdReport predict_central_single(Detector detector, const DensityMetrics& metrics,
                                       double theta, std::size_t n0, std::size_t k,
                                       std::optional<double> c) {
  if (n0 < 2 || n0 % 2 != 0) throw OddN0(n0);
  ThresholdReport r;
  r.anomaly_type = AnomalyKind::central_single;
  r.detector = detector;
  r.observed_gap = theta;
  r.n0 = n0;
  r.metrics = metrics;
  if (detector == Detector::iforest) {
    r.calibration_c = c.value_or(calibration().central_iforest_c);
    r.threshold = r.calibration_c * std::sqrt(static_cast<double>(n0) * metrics.kappa);
    r.sufficient_only = true;
    r.rule = "c * sqrt(n0 * kappa)";
  } else {
    if (k < 1) throw InvalidParams("k must be >= 1 for the knn predictor");
    r.k = k;
    if (c.has_value()) {
      r.calibration_c = *c;
      r.threshold = r.calibration_c * static_cast<double>(k) * metrics.delta;
      r.rule = "c * k * delta";
    } else {
      // Exact bound from the max/min score analysis; two-sided.
      r.threshold = (static_cast<double>(k) + 1.0) / 2.0 * metrics.max_gap -
                    (static_cast<double>(k) / 2.0 - 1.0) / 2.0 * metrics.min_gap;
      r.rule = "(k+1)/2 * U - (k/2-1)/2 * L";
    }
    r.sufficient_only = false;
  }
  r.detected = theta > r.threshold;
  if (r.sufficient_only && !r.detected) r.note = "below threshold: detection not guaranteed";
  return r;
}

ThresholdReport predict_marginal_clustered(Detector detector, const DensityMetrics& metrics,
                                           double theta, std::size_t n1, std::size_t k,
                                           std::optional<double> c) {
  ThresholdReport r;
  r.anomaly_type = AnomalyKind::marginal_clustered;
  r.detector = detector;
  r.observed_gap = theta;
  r.n1 = n1;
  r.metrics = metrics;
  if (detector == Detector::iforest) {
    if (n1 % 2 == 0) throw EvenN1(n1);
    r.calibration_c = c.value_or(calibration().clustered_iforest_c);
    r.threshold =
        r.calibration_c * static_cast<double>(n1) * static_cast<double>(n1) * metrics.kappa;
    r.sufficient_only = true;
    r.rule = "c * n1^2 * kappa";
  } else {
    if (k < 1) throw InvalidParams("k must be >= 1 for the knn predictor");
    r.k = k;
    r.calibration_c = c.value_or(calibration().clustered_knn_c);
    r.threshold = r.calibration_c * static_cast<double>(k) * metrics.delta;
    r.sufficient_only = false;
    r.rule = "c * k * delta";
    if (k <= n1) {
      r.note = "k <= n1: outside the theorem's regime, clustered anomalies may be missed";
    }
  }
  r.detected = theta > r.threshold;
  if (r.sufficient_only && !r.detected) {
    r.note = r.note.empty() ? "below threshold: detection not guaranteed" : r.note;
  }
  return r;
}

namespace {

SortedSample1D sample_from_gaps(const std::vector<double>& gaps) {
  std::vector<double> xs(gaps.size() + 1);
  xs[0] = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) xs[i + 1] = xs[i] + gaps[i];
  return SortedSample1D(std::move(xs));
}

std::vector<std::size_t> iota1(std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), std::size_t{1});
  return v;
}

}  // namespace

CaseDataset construct_case(AnomalyKind kind, const CaseParams& p) {
  std::vector<double> gaps;
  std::vector<std::size_t> anomalies;

  switch (kind) {
    case AnomalyKind::marginal_single: {
      if (p.n < 3) throw InvalidParams("marginal_single needs n >= 3");
      if (!(p.anomaly_gap > 0) || !(p.normal_gap_max > 0) || !(p.normal_gap_min > 0) ||
          p.normal_gap_min > p.normal_gap_max) {
        throw InvalidParams("marginal_single needs anomaly_gap > 0 and 0 < L <= U");
      }
      gaps.push_back(p.anomaly_gap);
      for (std::size_t t = 0; t + 2 < p.n; ++t) {
        gaps.push_back(t % 2 == 0 ? p.normal_gap_max : p.normal_gap_min);
      }
      anomalies = {1};
      break;
    }
    case AnomalyKind::central_single:
    case AnomalyKind::counterexample_central: {
      const std::size_t n0 = p.n0;
      if (n0 < 4 || n0 % 2 != 0) throw OddN0(n0);
      if (!(p.anomaly_gap > 0)) throw InvalidParams("central_single needs anomaly_gap > 0");
      const double g = kind == AnomalyKind::counterexample_central ? 1.0 : p.normal_gap_max;
      if (!(g > 0)) throw InvalidParams("normal gap must be positive");
      gaps.assign(n0 / 2 - 1, g);
      gaps.push_back(p.anomaly_gap);
      gaps.push_back(p.anomaly_gap);
      gaps.insert(gaps.end(), n0 / 2 - 1, g);
      anomalies = {n0 / 2 + 1};
      break;
    }
    case AnomalyKind::marginal_clustered:
    case AnomalyKind::counterexample_clustered: {
      if (p.n1 < 1 || p.n0 < 2) throw InvalidParams("clustered case needs n1 >= 1, n0 >= 2");
      if (!(p.anomaly_gap > 0)) throw InvalidParams("clustered case needs anomaly_gap > 0");
      const double a = kind == AnomalyKind::counterexample_clustered ? 1.0 : p.cluster_gap;
      const double g = kind == AnomalyKind::counterexample_clustered ? 1.0 : p.normal_gap_max;
      if (!(a > 0) || !(g > 0)) throw InvalidParams("gaps must be positive");
      gaps.assign(p.n1 - 1, a);
      gaps.push_back(p.anomaly_gap);
      gaps.insert(gaps.end(), p.n0 - 1, g);
      anomalies = iota1(p.n1);
      break;
    }
    case AnomalyKind::counterexample_marginal: {
      if (p.n < 6) throw InvalidParams("counterexample_marginal needs n >= 6");
      const double U = p.normal_gap_max;
      if (!(U > 0)) throw InvalidParams("normal gap must be positive");
      const double eps = p.epsilon > 0 ? p.epsilon : 0.01 * U;
      gaps.push_back(U + eps);
      gaps.push_back(U / 2.0);
      gaps.insert(gaps.end(), p.n - 3, U);
      anomalies = {1};
      break;
    }
  }
  return CaseDataset{kind, sample_from_gaps(gaps), std::move(anomalies)};
}

nlohmann::json report_to_json(const ThresholdReport& r) {
  nlohmann::json j;
  j["format"] = "isodepth-threshold-report";
  j["version"] = 1;
  j["anomaly_type"] = to_string(r.anomaly_type);
  j["detector"] = to_string(r.detector);
  j["observed_gap"] = r.observed_gap;
  j["threshold"] = r.threshold;
  j["rule"] = r.rule;
  j["decision"] =
      r.detected ? "detected" : (r.sufficient_only ? "not_guaranteed" : "not_detected");
  j["detected"] = r.detected;
  if (!r.note.empty()) j["note"] = r.note;
  j["metrics"] = {{"U", r.metrics.max_gap},
                  {"L", r.metrics.min_gap},
                  {"kappa", r.metrics.kappa},
                  {"delta", r.metrics.delta},
                  {"first_gap", r.metrics.first_gap},
                  {"last_gap", r.metrics.last_gap}};
  if (r.n0 > 0) j["n0"] = r.n0;
  if (r.n1 > 0) j["n1"] = r.n1;
  if (r.k > 0) j["k"] = r.k;
  if (r.calibration_c > 0) {
    j["calibration_c"] = r.calibration_c;
    j["calibration_version"] = calibration().version;
  }
  return j;
}

}  // namespace isodepth
