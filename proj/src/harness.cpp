#include "isodepth/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "isodepth/forest.hpp"
#include "isodepth/kernels.hpp"
#include "isodepth/knn.hpp"
#include "isodepth/rng.hpp"

namespace isodepth {

const char* to_string(Generator g) {
  switch (g) {
    case Generator::normal: return "normal";
    case Generator::uniform: return "uniform";
    case Generator::exponential: return "exponential";
    case Generator::csv: return "csv";
  }
  return "?";
}

Generator generator_from_string(const std::string& name) {
  for (auto g : {Generator::normal, Generator::uniform, Generator::exponential, Generator::csv}) {
    if (name == to_string(g)) return g;
  }
  throw InvalidParams("unknown generator '" + name + "'");
}

std::vector<double> generate_samples(Generator g, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  switch (g) {
    case Generator::uniform:
      for (auto& x : out) x = rng.next_double();
      break;
    case Generator::exponential:
      for (auto& x : out) x = -std::log(1.0 - rng.next_double());
      break;
    case Generator::normal:
      // Box-Muller; two uniforms per draw, no caching.
      for (auto& x : out) {
        const double u1 = rng.next_double();
        const double u2 = rng.next_double();
        x = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
      }
      break;
    case Generator::csv:
      throw InvalidParams("csv generator draws no samples; load the file instead");
  }
  return out;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["generator"] = to_string(cfg.generator);
  if (cfg.generator == Generator::csv) {
    j["csv_path"] = cfg.csv_path;
    j["csv_column"] = cfg.csv_column;
  }
  j["n"] = cfg.n;
  j["psi"] = cfg.psi;
  j["M_grid"] = cfg.M_grid;
  j["repeats"] = cfg.repeats;
  j["seed"] = cfg.seed;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("generator")) cfg.generator = generator_from_string(j.at("generator"));
  if (j.contains("csv_path")) cfg.csv_path = j.at("csv_path").get<std::string>();
  if (j.contains("csv_column")) cfg.csv_column = j.at("csv_column").get<std::string>();
  if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
  if (j.contains("psi")) cfg.psi = j.at("psi").get<std::size_t>();
  if (j.contains("M_grid")) cfg.M_grid = j.at("M_grid").get<std::vector<std::size_t>>();
  if (j.contains("repeats")) cfg.repeats = j.at("repeats").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

namespace {

void validate(const ExperimentConfig& cfg) {
  if (cfg.M_grid.empty()) throw InvalidParams("M_grid must be nonempty");
  if (!std::is_sorted(cfg.M_grid.begin(), cfg.M_grid.end()) || cfg.M_grid.front() < 1) {
    throw InvalidParams("M_grid must be ascending and positive");
  }
  if (cfg.repeats < 1) throw InvalidParams("repeats must be >= 1");
  if (cfg.n < 2) throw NotEnoughPoints("experiment needs n >= 2");
  if (cfg.psi < 1 || cfg.psi > cfg.n) throw InvalidParams("psi must be in [1, n]");
}

SortedSample1D experiment_data(const ExperimentConfig& cfg) {
  if (cfg.generator == Generator::csv) {
    const std::vector<std::string> cols =
        cfg.csv_column.empty() ? std::vector<std::string>{}
                               : std::vector<std::string>{cfg.csv_column};
    const Dataset data = load_csv(cfg.csv_path, cols);
    return sort_and_validate(data.column(0));
  }
  return sort_and_validate(generate_samples(cfg.generator, cfg.n, derive_seed(cfg.seed, 0xDA7A)));
}

// Expected depth of every training point under one tree's subsample.
void add_subsample_reference(const SortedSample1D& full, const std::vector<std::size_t>& rows,
                             std::vector<double>& acc) {
  std::vector<double> sub(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) sub[t] = full.values()[rows[t]];
  const SortedSample1D sorted = sort_and_validate(sub);
  for (std::size_t i = 0; i < full.size(); ++i) {
    acc[i] += expected_depth_any(sorted, full.values()[i]);
  }
}

}  // namespace

ConvergenceResult convergence_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const SortedSample1D data = experiment_data(cfg);
  const std::size_t n = data.size();
  if (cfg.psi > n) throw InvalidParams("psi exceeds data size");
  const Dataset train = Dataset::from_sample(data);

  std::vector<double> full_reference;
  if (cfg.psi == n) {
    full_reference = depth_profile(data).expected_depths;
  }

  ConvergenceResult result;
  result.config = cfg;
  for (const std::size_t M : cfg.M_grid) {
    for (std::size_t rep = 1; rep <= cfg.repeats; ++rep) {
      const std::uint64_t forest_seed = derive_seed(cfg.seed, rep);
      const Forest forest = fit_forest(train, M, cfg.psi, forest_seed);
      const std::vector<double> scores = score_all(forest, train);

      std::vector<double> reference;
      if (cfg.psi == n) {
        reference = full_reference;
      } else {
        reference.assign(n, 0.0);
        for (std::size_t m = 0; m < M; ++m) {
          Rng stream = tree_stream(forest_seed, m);
          add_subsample_reference(data, subsample_indices(n, cfg.psi, stream), reference);
        }
        for (double& v : reference) v /= static_cast<double>(M);
      }

      const double mse =
          kernels::sum_squared_diff(scores.data(), reference.data(), n) / static_cast<double>(n);
      result.cells.push_back({M, rep, mse});
    }
  }

  for (const std::size_t M : cfg.M_grid) {
    double mean = 0.0;
    std::size_t count = 0;
    for (const auto& cell : result.cells) {
      if (cell.M == M) {
        mean += cell.mse;
        ++count;
      }
    }
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (const auto& cell : result.cells) {
      if (cell.M == M) var += (cell.mse - mean) * (cell.mse - mean);
    }
    const double sd = count > 1 ? std::sqrt(var / static_cast<double>(count - 1)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(static_cast<double>(count));
    result.summary.push_back({M, mean, mean - half, mean + half});
  }
  return result;
}

void write_convergence_csv(const ConvergenceResult& result, std::ostream& out,
                           const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "M,repeat,mse\n";
  char buf[64];
  for (const auto& cell : result.cells) {
    std::snprintf(buf, sizeof(buf), "%.17g", cell.mse);
    out << cell.M << ',' << cell.repeat << ',' << buf << '\n';
  }
}

nlohmann::json convergence_to_json(const ConvergenceResult& result) {
  nlohmann::json j;
  j["format"] = "isodepth-convergence";
  j["version"] = 1;
  j["config"] = config_to_json(result.config);
  auto cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    cells.push_back({{"M", cell.M}, {"repeat", cell.repeat}, {"mse", cell.mse}});
  }
  j["cells"] = std::move(cells);
  auto summary = nlohmann::json::array();
  for (const auto& s : result.summary) {
    summary.push_back(
        {{"M", s.M}, {"mean_mse", s.mean}, {"band_lo", s.band_lo}, {"band_hi", s.band_hi}});
  }
  j["summary"] = std::move(summary);
  return j;
}

ConcentrationResult concentration_check(const SortedSample1D& s, double epsilon, std::size_t M,
                                        std::size_t trials, std::uint64_t seed,
                                        std::size_t eval_index) {
  if (!(epsilon > 0)) throw InvalidParams("epsilon must be positive");
  if (M < 1 || trials < 1) throw InvalidParams("M and trials must be >= 1");
  const std::size_t n = s.size();
  const double oracle = expected_depth_at_sample(s, eval_index);
  const Dataset train = Dataset::from_sample(s);
  const double point[1] = {s.at(eval_index)};

  std::size_t violations = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Forest forest = fit_forest(train, M, n, derive_seed(seed, trial));
    const double mean_depth = score(forest, point);
    if (std::abs(mean_depth - oracle) >= epsilon) ++violations;
  }

  ConcentrationResult result;
  result.violations = violations;
  result.trials = trials;
  result.empirical_freq = static_cast<double>(violations) / static_cast<double>(trials);
  result.hoeffding_bound =
      2.0 * std::exp(-2.0 * epsilon * epsilon * static_cast<double>(M) /
                     (static_cast<double>(n) * static_cast<double>(n)));
  result.oracle_depth = oracle;
  return result;
}

GapStatistics uniform_gap_statistics(std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n < 4) throw NotEnoughPoints("gap statistics need n >= 4");
  if (trials < 1) throw InvalidParams("trials must be >= 1");

  std::vector<double> kappas(trials);
  double min_gap_sum = 0.0;
  std::vector<double> draw(n);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_stream(seed, t);
    for (auto& x : draw) x = rng.next_double();
    std::sort(draw.begin(), draw.end());
    double lo = draw[1] - draw[0];
    double hi = lo;
    for (std::size_t i = 2; i < n; ++i) {
      const double g = draw[i] - draw[i - 1];
      if (g < lo) lo = g;
      if (g > hi) hi = g;
    }
    min_gap_sum += lo;
    kappas[t] = hi / lo;
  }

  GapStatistics stats;
  stats.n = n;
  stats.trials = trials;
  stats.mean_min_gap = min_gap_sum / static_cast<double>(trials);
  stats.expected_min_gap = 1.0 / (static_cast<double>(n) * static_cast<double>(n) - 1.0);
  const double cutoff = std::sqrt(static_cast<double>(n)) / 2.0;
  stats.frac_kappa_ge_half_sqrt_n =
      static_cast<double>(std::count_if(kappas.begin(), kappas.end(),
                                        [&](double k) { return k >= cutoff; })) /
      static_cast<double>(trials);
  std::sort(kappas.begin(), kappas.end());
  for (const double level : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
    const auto pos = static_cast<std::size_t>(level * static_cast<double>(trials - 1));
    stats.kappa_quantiles.emplace_back(level, kappas[pos]);
  }
  return stats;
}

nlohmann::json gap_statistics_to_json(const GapStatistics& stats) {
  nlohmann::json j;
  j["format"] = "isodepth-gapstats";
  j["version"] = 1;
  j["n"] = stats.n;
  j["trials"] = stats.trials;
  j["mean_min_gap"] = stats.mean_min_gap;
  j["expected_min_gap"] = stats.expected_min_gap;
  j["frac_kappa_ge_half_sqrt_n"] = stats.frac_kappa_ge_half_sqrt_n;
  auto quantiles = nlohmann::json::array();
  for (const auto& [level, value] : stats.kappa_quantiles) {
    quantiles.push_back({{"level", level}, {"kappa", value}});
  }
  j["kappa_quantiles"] = std::move(quantiles);
  return j;
}

namespace {

double map_point(const Dataset& data, std::span<const double> x, const MappingSpec& spec,
                 const std::vector<double>& centroid) {
  switch (spec.kind) {
    case Mapping::coordinate:
      if (spec.coordinate >= data.d()) throw IndexOutOfBounds("mapping coordinate");
      return x[spec.coordinate];
    case Mapping::l1_centroid:
      return kernels::l1_distance(x.data(), centroid.data(), data.d());
    case Mapping::rbf: {
      const double* ref = spec.reference.empty() ? centroid.data() : spec.reference.data();
      if (!spec.reference.empty() && spec.reference.size() != data.d()) {
        throw DimensionMismatch(data.d(), spec.reference.size());
      }
      return std::exp(-spec.gamma * kernels::sum_squared_diff(x.data(), ref, data.d()));
    }
  }
  throw InvalidParams("unknown mapping");
}

}  // namespace

double estimate_depth_multidim(const Dataset& data, std::span<const double> point,
                               MultiDimMode mode, const MappingSpec& mapping) {
  if (point.size() != data.d()) throw DimensionMismatch(data.d(), point.size());

  if (mode == MultiDimMode::average_projection) {
    if (data.d() < 2) throw InvalidParams("average_projection needs d >= 2");
    double total = 0.0;
    for (std::size_t j = 0; j < data.d(); ++j) {
      const SortedSample1D s = sort_and_validate(data.column(j));
      total += expected_depth_any(s, point[j]);
    }
    return total / static_cast<double>(data.d());
  }

  std::vector<double> centroid(data.d(), 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.d(); ++j) centroid[j] += data.at(i, j);
  }
  for (double& c : centroid) c /= static_cast<double>(data.n());

  std::vector<double> mapped(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    mapped[i] = map_point(data, data.row(i), mapping, centroid);
  }
  const SortedSample1D s = sort_and_validate(mapped);
  return expected_depth_any(s, map_point(data, point, mapping, centroid));
}

std::vector<DepthProfileRow> depth_profile_experiment(const SortedSample1D& s,
                                                      std::size_t m_anomalies, std::uint64_t seed,
                                                      std::size_t M) {
  const DepthProfile profile = depth_profile(s);
  const Dataset train = Dataset::from_sample(s);
  const Forest forest = fit_forest(train, M, s.size(), seed);
  const std::vector<double> scores = score_all(forest, train);

  std::vector<bool> flagged(s.size(), false);
  for (const std::size_t i : rank_by_depth(profile, m_anomalies)) flagged[i - 1] = true;

  std::vector<DepthProfileRow> rows(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    rows[i] = {i + 1, s.values()[i], profile.expected_depths[i], scores[i], flagged[i]};
  }
  return rows;
}

}  // namespace isodepth
