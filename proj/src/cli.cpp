#include "isodepth/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isodepth/casestudy.hpp"
#include "isodepth/core.hpp"
#include "isodepth/forest.hpp"
#include "isodepth/harness.hpp"
#include "isodepth/knn.hpp"
#include "isodepth/oracle.hpp"
#include "isodepth/version.hpp"
#include "isodepth/walk.hpp"

namespace isodepth::cli {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Data sink: '-' (default) writes to the run's stdout stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

struct GlobalOpts {
  std::uint64_t seed = 42;
  std::string output = "-";
  std::string format = "csv";
  unsigned threads = 0;
};

std::string provenance(const GlobalOpts& g, const std::string& command,
                       const std::string& detail) {
  std::string line = std::string("isodepth ") + kVersion + " " + command;
  if (!detail.empty()) line += " " + detail;
  line += " seed=" + std::to_string(g.seed);
  return line;
}

SortedSample1D load_column(const std::string& path, const std::string& column, double jitter,
                           std::uint64_t seed, std::ostream& err) {
  const std::vector<std::string> cols =
      column.empty() ? std::vector<std::string>{} : std::vector<std::string>{column};
  const Dataset data = load_csv(path, cols, &err);
  const std::vector<double> values = data.column(0);
  if (jitter > 0) return sort_and_validate_jitter(values, jitter, seed);
  return sort_and_validate(values);
}

void write_scores_csv(std::ostream& out, const std::string& comment,
                      const std::vector<double>& scores) {
  out << "# " << comment << "\n";
  out << "index,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << (i + 1) << ',' << fmt_double(scores[i]) << '\n';
  }
}

// ---- subcommands ----------------------------------------------------------

int cmd_fit(const GlobalOpts& g, const std::string& input,
            const std::vector<std::string>& columns, std::size_t trees, std::size_t psi,
            const std::string& model_path, std::ostream& out, std::ostream& err) {
  const Dataset data = load_csv(input, columns, &err);
  const std::size_t effective_psi = psi == 0 ? std::min<std::size_t>(256, data.n()) : psi;
  const Forest forest = fit_forest(data, trees, effective_psi, g.seed, g.threads);

  if (!model_path.empty()) {
    std::ofstream model(model_path, std::ios::binary);
    if (!model) throw IoError("cannot write '" + model_path + "'");
    model << forest_to_json(forest, data.column_names()).dump(2) << '\n';
  }

  const std::vector<double> scores = score_all(forest, data, g.threads);
  Output output(g.output, out);
  if (g.format == "json") {
    nlohmann::json j;
    j["command"] = "fit";
    j["seed"] = g.seed;
    j["scores"] = scores;
    output.stream() << j.dump(2) << '\n';
  } else {
    write_scores_csv(output.stream(), provenance(g, "fit", "input=" + input), scores);
  }
  return 0;
}

int cmd_score(const GlobalOpts& g, const std::string& model_path, const std::string& input,
              const std::vector<std::string>& columns, std::ostream& out, std::ostream& err) {
  std::ifstream model(model_path);
  if (!model) throw IoError("cannot open '" + model_path + "'");
  nlohmann::json j;
  model >> j;
  const Forest forest = forest_from_json(j);

  std::vector<std::string> cols = columns;
  if (cols.empty() && j.contains("column_names")) {
    cols = j.at("column_names").get<std::vector<std::string>>();
  }
  const Dataset data = load_csv(input, cols, &err);
  const std::vector<double> scores = score_all(forest, data, g.threads);

  Output output(g.output, out);
  if (g.format == "json") {
    nlohmann::json r;
    r["command"] = "score";
    r["seed"] = g.seed;
    r["scores"] = scores;
    output.stream() << r.dump(2) << '\n';
  } else {
    write_scores_csv(output.stream(), provenance(g, "score", "input=" + input), scores);
  }
  return 0;
}

int cmd_oracle(const GlobalOpts& g, const std::string& input, const std::string& column,
               double jitter, std::ostream& out, std::ostream& err) {
  const SortedSample1D s = load_column(input, column, jitter, g.seed, err);
  const DepthProfile profile = depth_profile(s);
  Output output(g.output, out);
  if (g.format == "json") {
    nlohmann::json j;
    j["command"] = "oracle";
    j["seed"] = g.seed;
    j["x"] = profile.sample.values();
    j["expected_depth"] = profile.expected_depths;
    output.stream() << j.dump(2) << '\n';
  } else {
    write_profile_csv(profile, output.stream(), provenance(g, "oracle", "input=" + input));
  }
  return 0;
}

int cmd_walk(const GlobalOpts& g, const std::string& input, const std::string& column,
             std::size_t target, double jitter, std::size_t simulate, std::ostream& out,
             std::ostream& err) {
  const SortedSample1D s = load_column(input, column, jitter, g.seed, err);
  const WalkChain chain = build_chain(s, target);
  nlohmann::json j = chain_to_json(chain);
  if (simulate > 0) {
    Rng rng = Rng::for_stream(g.seed, 0x5173);
    double total = 0.0;
    for (std::size_t t = 0; t < simulate; ++t) {
      total += static_cast<double>(simulate_walk(s, target, rng).steps());
    }
    j["simulated_mean_steps"] = total / static_cast<double>(simulate);
    j["simulations"] = simulate;
  }
  Output output(g.output, out);
  output.stream() << j.dump(2) << '\n';
  err << "expected_steps: " << fmt_double(j["expected_steps"].get<double>()) << '\n';
  return 0;
}

int cmd_knn(const GlobalOpts& g, const std::string& input,
            const std::vector<std::string>& columns, std::size_t k, bool include_self,
            std::ostream& out, std::ostream& err) {
  const Dataset data = load_csv(input, columns, &err);
  const KnnConfig cfg{k, !include_self};
  const std::vector<double> scores = knn_scores_training(data, cfg);
  const std::vector<std::size_t> order = rank_by_knn(data, cfg, data.n());
  std::vector<std::size_t> rank(data.n());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos] - 1] = pos + 1;

  Output output(g.output, out);
  if (g.format == "json") {
    nlohmann::json j;
    j["command"] = "knn";
    j["seed"] = g.seed;
    j["k"] = k;
    j["scores"] = scores;
    j["rank"] = rank;
    output.stream() << j.dump(2) << '\n';
  } else {
    auto& os = output.stream();
    os << "# " << provenance(g, "knn", "input=" + input + " k=" + std::to_string(k)) << "\n";
    os << "index";
    for (const auto& name : data.column_names()) os << ',' << name;
    os << ",score,rank\n";
    for (std::size_t i = 0; i < data.n(); ++i) {
      os << (i + 1);
      for (std::size_t jcol = 0; jcol < data.d(); ++jcol) os << ',' << fmt_double(data.at(i, jcol));
      os << ',' << fmt_double(scores[i]) << ',' << rank[i] << '\n';
    }
  }
  return 0;
}

int cmd_case(const GlobalOpts& g, const std::string& kind_name, const CaseParams& params,
             const std::string& detector_name, std::size_t k, const std::string& report_path,
             std::ostream& out, std::ostream& err) {
  const AnomalyKind kind = anomaly_kind_from_string(kind_name);
  const CaseDataset ds = construct_case(kind, params);
  const std::size_t n = ds.sample.size();

  // Density metrics of the normal block for the threshold predictors.
  DensityMetrics metrics;
  std::size_t n0 = params.n0;
  std::size_t n1 = params.n1;
  switch (kind) {
    case AnomalyKind::marginal_single:
    case AnomalyKind::counterexample_marginal:
      metrics = density_metrics(ds.sample, 2, n - 1);
      n0 = n - 1;
      break;
    case AnomalyKind::central_single:
    case AnomalyKind::counterexample_central:
      metrics = density_metrics(ds.sample, 1, n0 / 2 - 1);
      break;
    case AnomalyKind::marginal_clustered:
    case AnomalyKind::counterexample_clustered:
      metrics = density_metrics(ds.sample, n1 + 1, n - 1);
      break;
  }

  const double theta = kind == AnomalyKind::counterexample_marginal
                           ? ds.sample.gap(1)
                           : params.anomaly_gap;

  std::vector<ThresholdReport> reports;
  const bool want_iforest = detector_name == "iforest" || detector_name == "both";
  const bool want_knn = detector_name == "knn" || detector_name == "both";
  switch (kind) {
    case AnomalyKind::marginal_single:
    case AnomalyKind::counterexample_marginal:
      if (want_iforest) reports.push_back(predict_marginal_single_iforest(metrics, theta));
      if (want_knn && k > 0) reports.push_back(predict_marginal_single_knn(metrics, theta, k));
      break;
    case AnomalyKind::central_single:
    case AnomalyKind::counterexample_central:
      if (want_iforest) {
        reports.push_back(predict_central_single(Detector::iforest, metrics, theta, n0));
      }
      if (want_knn && k > 0) {
        reports.push_back(predict_central_single(Detector::knn, metrics, theta, n0, k));
      }
      break;
    case AnomalyKind::marginal_clustered:
    case AnomalyKind::counterexample_clustered:
      if (want_iforest) {
        reports.push_back(predict_marginal_clustered(Detector::iforest, metrics, theta, n1));
      }
      if (want_knn && k > 0) {
        reports.push_back(predict_marginal_clustered(Detector::knn, metrics, theta, n1, k));
      }
      break;
  }

  Output output(g.output, out);
  auto& os = output.stream();
  os << "# " << provenance(g, "case", std::string("kind=") + to_string(kind)) << "\n";
  os << "index,x,is_anomaly\n";
  std::vector<bool> is_anomaly(n, false);
  for (const std::size_t i : ds.anomaly_indices) is_anomaly[i - 1] = true;
  for (std::size_t i = 0; i < n; ++i) {
    os << (i + 1) << ',' << fmt_double(ds.sample.values()[i]) << ',' << (is_anomaly[i] ? 1 : 0)
       << '\n';
  }

  nlohmann::json report;
  report["format"] = "isodepth-case";
  report["version"] = 1;
  report["kind"] = to_string(kind);
  report["seed"] = g.seed;
  report["n"] = n;
  report["anomaly_indices"] = ds.anomaly_indices;
  report["theta"] = theta;
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  report["reports"] = std::move(arr);
  if (report_path.empty() || report_path == "-") {
    err << report.dump(2) << '\n';
  } else {
    std::ofstream rf(report_path, std::ios::binary);
    if (!rf) throw IoError("cannot write '" + report_path + "'");
    rf << report.dump(2) << '\n';
  }
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& input,
               const std::vector<std::string>& columns, std::ostream& out, std::ostream& err) {
  const Dataset data = load_csv(input, columns, &err);
  const AssumptionSummary summary = verify_assumption_batch(data);
  Output output(g.output, out);
  if (g.format == "json") {
    nlohmann::json j;
    j["command"] = "verify";
    j["seed"] = g.seed;
    j["successful"] = summary.successful;
    j["valid"] = summary.valid;
    j["total"] = summary.total;
    auto cols = nlohmann::json::array();
    for (const auto& c : summary.columns) {
      cols.push_back({{"column", c.column},
                      {"n", c.n},
                      {"kappa", c.kappa},
                      {"bound", c.bound},
                      {"pass", c.pass},
                      {"valid", c.valid}});
    }
    j["columns"] = std::move(cols);
    output.stream() << j.dump(2) << '\n';
  } else {
    auto& os = output.stream();
    os << "# " << provenance(g, "verify", "input=" + input) << "\n";
    os << "# successful=" << summary.successful << " valid=" << summary.valid
       << " total=" << summary.total << "\n";
    os << "column,n,kappa,bound,pass,valid\n";
    for (const auto& c : summary.columns) {
      os << c.column << ',' << c.n << ',' << fmt_double(c.kappa) << ',' << fmt_double(c.bound)
         << ',' << (c.pass ? 1 : 0) << ',' << (c.valid ? 1 : 0) << '\n';
    }
  }
  return 0;
}

int cmd_converge(const GlobalOpts& g, const std::string& config_path, ExperimentConfig cfg,
                 bool seed_set_by_flag, const std::string& summary_path, std::ostream& out,
                 std::ostream& err) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open '" + config_path + "'");
    nlohmann::json j;
    in >> j;
    cfg = config_from_json(j);
    if (seed_set_by_flag || !j.contains("seed")) cfg.seed = g.seed;
  } else {
    cfg.seed = g.seed;
  }
  const ConvergenceResult result = convergence_experiment(cfg);
  err << "resolved config: " << config_to_json(cfg).dump() << '\n';

  Output output(g.output, out);
  write_convergence_csv(result, output.stream(), provenance(g, "converge", ""));

  if (!summary_path.empty()) {
    std::ofstream sf(summary_path, std::ios::binary);
    if (!sf) throw IoError("cannot write '" + summary_path + "'");
    sf << convergence_to_json(result).dump(2) << '\n';
  }
  return 0;
}

int cmd_gapstats(const GlobalOpts& g, std::size_t n, std::size_t trials, std::ostream& out,
                 std::ostream& /*err*/) {
  const GapStatistics stats = uniform_gap_statistics(n, trials, g.seed);
  nlohmann::json j = gap_statistics_to_json(stats);
  j["seed"] = g.seed;
  Output output(g.output, out);
  output.stream() << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"isodepth: isolation depths, exact expected-depth oracles, and detector case studies"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base seed for all randomized commands")->capture_default_str();
  app.add_option("--output", g.output, "output path; '-' = stdout")->capture_default_str();
  app.add_option("--format", g.format, "output format for tabular commands")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads; 0 = hardware default")
      ->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "fit a forest on a CSV and emit training scores");
  std::string fit_input, fit_model;
  std::vector<std::string> fit_columns;
  std::size_t fit_trees = 100, fit_psi = 0;
  fit->add_option("--input", fit_input, "training CSV")->required();
  fit->add_option("--columns", fit_columns, "column selection (default: numeric columns)");
  fit->add_option("--trees", fit_trees, "ensemble size M")->capture_default_str();
  fit->add_option("--psi", fit_psi, "subsample size (0 = min(256, n))")->capture_default_str();
  fit->add_option("--model", fit_model, "write the forest JSON here");

  // score
  auto* score_cmd = app.add_subcommand("score", "score points with a saved forest");
  std::string score_model, score_input;
  std::vector<std::string> score_columns;
  score_cmd->add_option("--model", score_model, "forest JSON from fit")->required();
  score_cmd->add_option("--input", score_input, "points CSV")->required();
  score_cmd->add_option("--columns", score_columns, "column selection");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exact expected depth profile of a 1-D column");
  std::string oracle_input, oracle_column;
  double oracle_jitter = 0.0;
  oracle_cmd->add_option("--input", oracle_input, "CSV file")->required();
  oracle_cmd->add_option("--column", oracle_column, "column name (default: first numeric)");
  oracle_cmd->add_option("--jitter", oracle_jitter, "break ties with seeded noise of this size");

  // walk
  auto* walk_cmd = app.add_subcommand("walk", "absorbing-chain dump for one target point");
  std::string walk_input, walk_column;
  std::size_t walk_target = 1, walk_sims = 0;
  double walk_jitter = 0.0;
  walk_cmd->add_option("--input", walk_input, "CSV file")->required();
  walk_cmd->add_option("--column", walk_column, "column name (default: first numeric)");
  walk_cmd->add_option("--target", walk_target, "target index (1-based)")->required();
  walk_cmd->add_option("--simulate", walk_sims, "also simulate this many trajectories");
  walk_cmd->add_option("--jitter", walk_jitter, "break ties with seeded noise of this size");

  // knn
  auto* knn_cmd = app.add_subcommand("knn", "k-NN anomaly scores (mean L1 distance)");
  std::string knn_input;
  std::vector<std::string> knn_columns;
  std::size_t knn_k = 1;
  bool knn_include_self = false;
  knn_cmd->add_option("--input", knn_input, "CSV file")->required();
  knn_cmd->add_option("--columns", knn_columns, "column selection");
  knn_cmd->add_option("--k", knn_k, "neighbor count")->capture_default_str();
  knn_cmd->add_flag("--include-self", knn_include_self, "keep the zero self-distance");

  // case
  auto* case_cmd = app.add_subcommand("case", "construct a case-study dataset and its report");
  std::string case_kind, case_detector = "both", case_report;
  CaseParams case_params;
  std::size_t case_k = 0;
  case_cmd
      ->add_option("--kind", case_kind,
                   "marginal_single|central_single|marginal_clustered|counterexample_marginal|"
                   "counterexample_central|counterexample_clustered")
      ->required();
  case_cmd->add_option("--n", case_params.n, "total points (marginal kinds)");
  case_cmd->add_option("--n0", case_params.n0, "normal count (central/clustered kinds)");
  case_cmd->add_option("--n1", case_params.n1, "anomaly count (clustered kinds)");
  case_cmd->add_option("--theta", case_params.anomaly_gap, "anomaly gap");
  case_cmd->add_option("--normal-gap-max", case_params.normal_gap_max, "normal block U")
      ->capture_default_str();
  case_cmd->add_option("--normal-gap-min", case_params.normal_gap_min, "normal block L")
      ->capture_default_str();
  case_cmd->add_option("--cluster-gap", case_params.cluster_gap, "gap inside the anomaly cluster")
      ->capture_default_str();
  case_cmd->add_option("--epsilon", case_params.epsilon,
                       "counterexample_marginal excess (0 = 0.01*U)");
  case_cmd->add_option("--detector", case_detector, "iforest|knn|both")->capture_default_str();
  case_cmd->add_option("--k", case_k, "neighbor count for the knn report");
  case_cmd->add_option("--report", case_report, "write the JSON report here ('-' = stderr)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check kappa >= sqrt(n+3) per column");
  std::string verify_input;
  std::vector<std::string> verify_columns;
  verify_cmd->add_option("--input", verify_input, "CSV file")->required();
  verify_cmd->add_option("--columns", verify_columns, "column selection");

  // converge
  auto* conv_cmd = app.add_subcommand("converge", "MSE-vs-ensemble-size experiment");
  std::string conv_config, conv_summary, conv_generator = "uniform";
  ExperimentConfig conv_cfg;
  std::vector<std::size_t> conv_grid;
  conv_cmd->add_option("--config", conv_config, "experiment config JSON");
  conv_cmd->add_option("--generator", conv_generator, "normal|uniform|exponential|csv")
      ->capture_default_str();
  conv_cmd->add_option("--input", conv_cfg.csv_path, "CSV file (generator=csv)");
  conv_cmd->add_option("--column", conv_cfg.csv_column, "column name (generator=csv)");
  conv_cmd->add_option("--n", conv_cfg.n, "sample count")->capture_default_str();
  conv_cmd->add_option("--psi", conv_cfg.psi, "subsample size")->capture_default_str();
  conv_cmd->add_option("--grid", conv_grid, "tree counts, ascending");
  conv_cmd->add_option("--repeats", conv_cfg.repeats, "repeats per cell")->capture_default_str();
  conv_cmd->add_option("--summary", conv_summary, "write the JSON summary here");

  // gapstats
  auto* gap_cmd = app.add_subcommand("gapstats", "uniform order-statistic gap statistics");
  std::size_t gap_n = 100, gap_trials = 10000;
  gap_cmd->add_option("--n", gap_n, "points per sample")->capture_default_str();
  gap_cmd->add_option("--trials", gap_trials, "number of samples")->capture_default_str();

  std::vector<std::string> argv_copy = args;
  try {
    std::vector<const char*> argv;
    argv.push_back("isodepth");
    for (const auto& a : argv_copy) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  err << "seed: " << g.seed << '\n';

  try {
    if (fit->parsed()) return cmd_fit(g, fit_input, fit_columns, fit_trees, fit_psi, fit_model, out, err);
    if (score_cmd->parsed())
      return cmd_score(g, score_model, score_input, score_columns, out, err);
    if (oracle_cmd->parsed())
      return cmd_oracle(g, oracle_input, oracle_column, oracle_jitter, out, err);
    if (walk_cmd->parsed())
      return cmd_walk(g, walk_input, walk_column, walk_target, walk_jitter, walk_sims, out, err);
    if (knn_cmd->parsed()) return cmd_knn(g, knn_input, knn_columns, knn_k, knn_include_self, out, err);
    if (case_cmd->parsed())
      return cmd_case(g, case_kind, case_params, case_detector, case_k, case_report, out, err);
    if (verify_cmd->parsed()) return cmd_verify(g, verify_input, verify_columns, out, err);
    if (conv_cmd->parsed()) {
      conv_cfg.generator = generator_from_string(conv_generator);
      if (!conv_grid.empty()) conv_cfg.M_grid = conv_grid;
      const bool seed_flag = app.count("--seed") > 0;
      return cmd_converge(g, conv_config, conv_cfg, seed_flag, conv_summary, out, err);
    }
    if (gap_cmd->parsed()) return cmd_gapstats(g, gap_n, gap_trials, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace isodepth::cli
