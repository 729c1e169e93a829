#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "isodepth/core.hpp"
#include "isodepth/oracle.hpp"

namespace isodepth {

enum class Generator { normal, uniform, exponential, csv };
const char* to_string(Generator g);
Generator generator_from_string(const std::string& name);

struct ExperimentConfig {
  Generator generator = Generator::uniform;
  std::string csv_path;    // generator == csv
  std::string csv_column;  // empty = first numeric column
  std::size_t n = 100;
  std::size_t psi = 100;
  std::vector<std::size_t> M_grid = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  std::size_t repeats = 10;
  std::uint64_t seed = 42;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct ConvergenceCell {
  std::size_t M = 0;
  std::size_t repeat = 0;  // 1-based
  double mse = 0.0;
};

struct ConvergenceResult {
  ExperimentConfig config;
  std::vector<ConvergenceCell> cells;  // ordered by (M, repeat)
  struct PerM {
    std::size_t M = 0;
    double mean = 0.0;
    double band_lo = 0.0;  // 95% normal band over repeats
    double band_hi = 0.0;
  };
  std::vector<PerM> summary;
};

// Mean squared error of the ensemble's average depths against the exact
// expected depths, per (M, repeat). With psi == n the reference is the depth
// profile of the data; with psi < n it is the closed form averaged over each
// tree's own subsample, re-derived from the forest's per-tree streams.
ConvergenceResult convergence_experiment(const ExperimentConfig& cfg);

void write_convergence_csv(const ConvergenceResult& result, std::ostream& out,
                           const std::string& comment = "");
nlohmann::json convergence_to_json(const ConvergenceResult& result);

struct ConcentrationResult {
  double empirical_freq = 0.0;
  double hoeffding_bound = 0.0;
  std::size_t violations = 0;
  std::size_t trials = 0;
  double oracle_depth = 0.0;
};

// Fraction of trials where the M-tree mean depth at one evaluation point
// (default: the leftmost, 1-based index 1) deviates from the exact value by
// at least epsilon, against the 2 exp(-2 eps^2 M / n^2) bound. Uses psi = n.
ConcentrationResult concentration_check(const SortedSample1D& s, double epsilon, std::size_t M,
                                        std::size_t trials, std::uint64_t seed,
                                        std::size_t eval_index = 1);

struct GapStatistics {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_min_gap = 0.0;
  double expected_min_gap = 0.0;  // 1 / (n^2 - 1)
  double frac_kappa_ge_half_sqrt_n = 0.0;
  std::vector<std::pair<double, double>> kappa_quantiles;  // (level, value)
};

// Order-statistic gap behavior of n-point uniform[0,1] samples.
GapStatistics uniform_gap_statistics(std::size_t n, std::size_t trials, std::uint64_t seed);
nlohmann::json gap_statistics_to_json(const GapStatistics& stats);

enum class MultiDimMode { average_projection, mapped };
enum class Mapping { coordinate, l1_centroid, rbf };

struct MappingSpec {
  Mapping kind = Mapping::coordinate;
  std::size_t coordinate = 0;            // Mapping::coordinate
  std::vector<double> reference;         // Mapping::rbf; empty = column means
  double gamma = 1.0;                    // Mapping::rbf
};

// Multi-dimensional depth estimates: per-dimension oracle averaging for
// reducible anomalies, or the oracle applied to a scalar feature mapping for
// irreducible ones. Mapped (and projected) values must be distinct.
double estimate_depth_multidim(const Dataset& data, std::span<const double> point,
                               MultiDimMode mode, const MappingSpec& mapping = {});

struct DepthProfileRow {
  std::size_t index = 0;  // 1-based
  double x = 0.0;
  double oracle_depth = 0.0;
  double forest_depth = 0.0;
  bool anomaly = false;
};

// Joins the exact profile with one Monte Carlo run (psi = n) and flags the
// m smallest expected depths.
std::vector<DepthProfileRow> depth_profile_experiment(const SortedSample1D& s,
                                                      std::size_t m_anomalies, std::uint64_t seed,
                                                      std::size_t M = 1000);

// Deterministic sample generators, all driven by the library's own stream.
std::vector<double> generate_samples(Generator g, std::size_t n, std::uint64_t seed);

}  // namespace isodepth
