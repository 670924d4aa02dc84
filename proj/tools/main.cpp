#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ball_accel/bench.hpp"
#include "ball_accel/csv.hpp"
#include "ball_accel/log.hpp"
#include "ball_accel/lower_bound.hpp"
#include "ball_accel/report.hpp"
#include "ball_accel/rng.hpp"
#include "ball_accel/solvers.hpp"
#include "ball_accel/synthetic.hpp"

namespace {

using ball_accel::Json;

struct CommonOptions {
  std::string data_path;
  std::string synth;  // "n,d" synthetic instance instead of a file
  std::string out_path;
  std::string plot_path;
  std::string constants_path;
  std::uint64_t seed = 1;
};

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ball_accel::Constants load_constants(const std::string& path) {
  ball_accel::Constants c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open constants file: " + path);
  Json doc = Json::parse(in);
  for (const auto& [key, value] : doc.items()) {
    if (key == "ms_iteration_constant") c.ms_iteration_constant = value.get<double>();
    else if (key == "baseline_iteration_constant") c.baseline_iteration_constant = value.get<double>();
    else if (key == "linesearch_budget_constant") c.linesearch_budget_constant = value.get<double>();
    else if (key == "regularizer_denominator") c.regularizer_denominator = value.get<double>();
    else if (key == "stability_factor") c.stability_factor = value.get<double>();
    else if (key == "newton_log_factor") c.newton_log_factor = value.get<double>();
    else if (key == "diameter_factor") c.diameter_factor = value.get<double>();
    else if (key == "lp_radius_shift") c.lp_radius_shift = value.get<double>();
    else if (key == "lp_phase_floor") c.lp_phase_floor = value.get<double>();
    else throw std::runtime_error("unknown key in constants file: " + key);
  }
  return c;
}

// Load (A, target) from a CSV file or generate a synthetic instance.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> load_task_data(const CommonOptions& opts,
                                                           bool labels) {
  if (!opts.synth.empty()) {
    const auto comma = opts.synth.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("--synth expects rows,cols");
    const int rows = std::stoi(opts.synth.substr(0, comma));
    const int cols = std::stoi(opts.synth.substr(comma + 1));
    if (labels) {
      const ball_accel::LogisticData data = ball_accel::synthetic_logistic(rows, cols, opts.seed);
      return {data.a, data.labels};
    }
    const ball_accel::RegressionData data = ball_accel::synthetic_regression(rows, cols, opts.seed);
    return {data.a, data.b};
  }
  if (opts.data_path.empty()) throw std::runtime_error("provide --data or --synth");
  const ball_accel::DenseCsv csv = ball_accel::load_dense_csv(opts.data_path);
  return {csv.a, csv.target};
}

void write_outputs(const CommonOptions& opts, const Json& doc,
                   const ball_accel::SolverTrace* trace) {
  const std::string body = doc.dump(2) + "\n";
  if (opts.out_path.empty()) {
    std::cout << body;
  } else {
    ball_accel::write_text_file(opts.out_path, body);
  }
  if (!opts.plot_path.empty() && trace != nullptr)
    ball_accel::write_text_file(opts.plot_path, ball_accel::emit_plotdata(*trace));
}

int run_solve(const std::string& task, const CommonOptions& opts, double eps, double delta,
              double p, double radius, bool estimate_radius) {
  const auto start = std::chrono::steady_clock::now();
  const ball_accel::Constants constants = load_constants(opts.constants_path);
  auto [a, target] = load_task_data(opts, task == "logistic");

  Json config;
  config["task"] = task;
  config["data"] = opts.data_path.empty() ? ("synthetic:" + opts.synth) : opts.data_path;
  config["rows"] = a.rows();
  config["cols"] = a.cols();
  config["seed"] = opts.seed;

  ball_accel::SolveReport report;
  if (task == "logistic" || task == "linf") {
    double r_bound = radius;
    if (estimate_radius) {
      const ball_accel::ComposedObjective probe =
          task == "logistic"
              ? ball_accel::ComposedObjective(a, Eigen::VectorXd::Zero(a.rows()),
                                              ball_accel::InnerLoss::logistic(target))
              : ball_accel::ComposedObjective(a, target, ball_accel::InnerLoss::power(2.0));
      r_bound = ball_accel::estimate_radius(probe, Eigen::VectorXd::Zero(a.cols()));
      config["radius_estimated"] = true;
    }
    if (!(r_bound > 0.0))
      throw std::runtime_error("--radius is required (or pass --estimate-radius)");
    config["eps"] = eps;
    config["radius"] = r_bound;
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(a.cols());
    report = task == "logistic"
                 ? ball_accel::solve_logistic(a, target, x0, eps, r_bound, constants)
                 : ball_accel::solve_linf(a, target, x0, eps, r_bound, constants);
  } else {  // lp
    config["p"] = p;
    config["delta"] = delta;
    report = ball_accel::solve_lp(a, target, p, delta, constants);
  }

  Json doc = ball_accel::report_document(config, report.status, report.objective, report.stats,
                                         report.trace, elapsed_seconds(start));
  if (!report.phases.empty()) {
    Json phases = Json::array();
    for (const auto& phase : report.phases) {
      Json row;
      row["eps_k"] = phase.eps_k;
      row["radius"] = phase.radius;
      row["qsc"] = phase.qsc;
      row["smoothness"] = phase.smoothness;
      row["final_objective"] = phase.final_objective;
      row["oracle_calls"] = phase.oracle_calls;
      row["linear_solves"] = phase.linear_solves;
      row["status"] = phase.status;
      phases.push_back(std::move(row));
    }
    doc["phases"] = std::move(phases);
  }
  Json solution = Json::array();
  for (Eigen::Index i = 0; i < report.x.size(); ++i) solution.push_back(report.x(i));
  doc["solution"] = std::move(solution);

  write_outputs(opts, doc, &report.trace);
  return 0;
}

int run_bench(const CommonOptions& opts, const std::string& task, const std::string& ratios_str,
              const std::string& radii_str, double eps_rel, double eps_abs, int rows, int cols) {
  if (task != "logistic") throw std::runtime_error("bench scaling supports task=logistic");
  const auto start = std::chrono::steady_clock::now();

  ball_accel::ScalingConfig config;
  config.constants = load_constants(opts.constants_path);
  config.rows = rows;
  config.cols = cols;
  config.seed = opts.seed;
  config.eps_rel = eps_rel;
  config.eps_abs = eps_abs;

  std::string sweep = ratios_str;
  if (!radii_str.empty()) {
    config.mode = ball_accel::SweepMode::kInitialDistance;
    sweep = radii_str;
  }
  std::stringstream ss(sweep);
  std::string token;
  while (std::getline(ss, token, ',')) config.ratios.push_back(std::stod(token));
  if (config.ratios.size() < 2) throw std::runtime_error("need at least two sweep points");

  const ball_accel::ScalingResult result = ball_accel::bench_logistic_scaling(config);

  Json doc;
  doc["schema_version"] = 1;
  Json echo;
  echo["task"] = task;
  echo["mode"] = config.mode == ball_accel::SweepMode::kOracleRadius ? "ratios" : "radii";
  echo["sweep"] = config.ratios;
  echo["rows"] = rows;
  echo["cols"] = cols;
  echo["seed"] = opts.seed;
  echo["eps_rel"] = eps_rel;
  echo["eps_abs"] = eps_abs;
  doc["config"] = std::move(echo);
  auto points_json = [](const std::vector<ball_accel::ScalingPoint>& pts) {
    Json arr = Json::array();
    for (const auto& pt : pts) {
      Json row;
      row["ratio"] = pt.ratio;
      row["oracle_calls"] = pt.oracle_calls;
      row["linear_solves"] = pt.linear_solves;
      row["iterations"] = pt.iterations;
      row["reached_target"] = pt.reached_target;
      arr.push_back(std::move(row));
    }
    return arr;
  };
  doc["accelerated"] = points_json(result.accelerated);
  doc["baseline"] = points_json(result.baseline);
  doc["accelerated_slope"] = result.accelerated_slope;
  doc["baseline_slope"] = result.baseline_slope;
  doc["wall_time_sec"] = elapsed_seconds(start);
  write_outputs(opts, doc, nullptr);
  return 0;
}

int run_lowerbound(const CommonOptions& opts, int chain, double oracle_radius,
                   double domain_radius, int trials, int budget, const std::string& strategy) {
  const auto start = std::chrono::steady_clock::now();
  ball_accel::QueryStrategy strat;
  if (strategy == "subgradient") strat = ball_accel::QueryStrategy::kSubgradient;
  else if (strategy == "greedy") strat = ball_accel::QueryStrategy::kGreedy;
  else if (strategy == "random") strat = ball_accel::QueryStrategy::kRandomSearch;
  else throw std::runtime_error("unknown strategy: " + strategy);

  double r = oracle_radius;
  if (!(r > 0.0)) r = domain_radius / std::pow(10.0 * chain, 1.5);
  if (budget <= 0) budget = chain;

  Json trials_json = Json::array();
  int bounded_count = 0;
  for (int t = 0; t < trials; ++t) {
    const ball_accel::NemirovskiInstance inst =
        ball_accel::make_nemirovski_instance(chain, r, domain_radius, opts.seed + t);
    const ball_accel::ProgressTrace trace =
        ball_accel::run_progress_experiment(strat, inst, budget, opts.seed * 31 + t);
    bool bounded = true;
    Json records = Json::array();
    for (const auto& rec : trace.records) {
      Json row;
      row["query"] = rec.query;
      row["progress"] = rec.progress;
      row["suboptimality"] = rec.suboptimality;
      records.push_back(std::move(row));
      if (rec.progress > rec.query) bounded = false;
    }
    if (bounded) ++bounded_count;
    Json trial;
    trial["seed"] = opts.seed + t;
    trial["dim"] = inst.dim;
    trial["theorem_scale"] = inst.theorem_scale;
    trial["progress_bounded"] = bounded;
    trial["records"] = std::move(records);
    trials_json.push_back(std::move(trial));
  }

  Json doc;
  doc["schema_version"] = 1;
  Json echo;
  echo["task"] = "lowerbound";
  echo["chain"] = chain;
  echo["oracle_radius"] = r;
  echo["domain_radius"] = domain_radius;
  echo["trials"] = trials;
  echo["budget"] = budget;
  echo["strategy"] = strategy;
  echo["seed"] = opts.seed;
  doc["config"] = std::move(echo);
  doc["bounded_trials"] = bounded_count;
  doc["trials"] = std::move(trials_json);
  doc["wall_time_sec"] = elapsed_seconds(start);
  write_outputs(opts, doc, nullptr);
  return 0;
}

void emit_error(const CommonOptions& opts, const std::string& message) {
  Json doc;
  doc["schema_version"] = 1;
  doc["error"] = message;
  const std::string body = doc.dump(2) + "\n";
  std::cerr << body;
  if (!opts.out_path.empty()) {
    try {
      ball_accel::write_text_file(opts.out_path, body);
    } catch (...) {
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex optimization through accelerated ball-oracle methods"};
  app.require_subcommand(1);

  CommonOptions opts;
  double eps = 1e-6, delta = 1e-3, p = 4.0, radius = 0.0, eps_rel = 1e-4, eps_abs = 1e-3;
  bool estimate = false;
  std::string task, ratios_str, radii_str, strategy = "subgradient";
  int rows = 50, cols = 10, chain = 8, trials = 20, budget = 0;
  double oracle_radius = 0.0, domain_radius = 1.0;

  CLI::App* solve = app.add_subcommand("solve", "Run one regression solve");
  CLI::App* solve_logistic_cmd = solve->add_subcommand("logistic", "Logistic regression");
  CLI::App* solve_linf_cmd = solve->add_subcommand("linf", "l_inf regression");
  CLI::App* solve_lp_cmd = solve->add_subcommand("lp", "l_p regression");
  solve->require_subcommand(1);
  for (CLI::App* cmd : {solve_logistic_cmd, solve_linf_cmd, solve_lp_cmd}) {
    cmd->add_option("--data", opts.data_path, "CSV data file, last column = target");
    cmd->add_option("--synth", opts.synth, "synthetic instance rows,cols");
    cmd->add_option("--out", opts.out_path, "report file (stdout if omitted)");
    cmd->add_option("--plot", opts.plot_path, "per-iteration plot CSV");
    cmd->add_option("--constants", opts.constants_path, "constants override file");
    cmd->add_option("--seed", opts.seed, "random seed");
  }
  for (CLI::App* cmd : {solve_logistic_cmd, solve_linf_cmd}) {
    cmd->add_option("--eps", eps, "target additive accuracy");
    cmd->add_option("--radius", radius, "initial distance bound R in the data seminorm");
    cmd->add_flag("--estimate-radius", estimate,
                  "heuristic (non-certified) radius from one Newton step");
  }
  solve_lp_cmd->add_option("--p", p, "power p > 3");
  solve_lp_cmd->add_option("--delta", delta, "multiplicative tolerance in (0,1)");

  CLI::App* bench = app.add_subcommand("bench", "Benchmarks");
  CLI::App* bench_scaling = bench->add_subcommand("scaling", "Oracle-call scaling sweep");
  bench->require_subcommand(1);
  bench_scaling->add_option("--task", task, "logistic")->required();
  bench_scaling->add_option("--ratios", ratios_str, "comma-separated R/r values");
  bench_scaling->add_option("--radii", radii_str, "comma-separated R values (r fixed)");
  bench_scaling->add_option("--eps-rel", eps_rel, "gap target relative to the initial gap");
  bench_scaling->add_option("--eps-abs", eps_abs, "absolute gap target for --radii sweeps");
  bench_scaling->add_option("--rows", rows, "synthetic instance rows");
  bench_scaling->add_option("--cols", cols, "synthetic instance cols");
  bench_scaling->add_option("--seed", opts.seed, "random seed");
  bench_scaling->add_option("--out", opts.out_path, "report file");
  bench_scaling->add_option("--constants", opts.constants_path, "constants override file");

  CLI::App* lowerbound = app.add_subcommand("lowerbound", "Hard-instance progress experiment");
  lowerbound->add_option("--chain", chain, "chain length N");
  lowerbound->add_option("--oracle-radius", oracle_radius, "r (default: R/(10N)^{3/2})");
  lowerbound->add_option("--domain-radius", domain_radius, "R");
  lowerbound->add_option("--trials", trials, "number of seeded trials");
  lowerbound->add_option("--budget", budget, "queries per trial (default N)");
  lowerbound->add_option("--strategy", strategy, "subgradient | greedy | random");
  lowerbound->add_option("--seed", opts.seed, "base seed");
  lowerbound->add_option("--out", opts.out_path, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (solve_logistic_cmd->parsed()) return run_solve("logistic", opts, eps, delta, p, radius, estimate);
    if (solve_linf_cmd->parsed()) return run_solve("linf", opts, eps, delta, p, radius, estimate);
    if (solve_lp_cmd->parsed()) return run_solve("lp", opts, eps, delta, p, radius, estimate);
    if (bench_scaling->parsed())
      return run_bench(opts, task, ratios_str, radii_str, eps_rel, eps_abs, rows, cols);
    if (lowerbound->parsed())
      return run_lowerbound(opts, chain, oracle_radius, domain_radius, trials, budget, strategy);
  } catch (const std::exception& e) {
    emit_error(opts, e.what());
    return 1;
  }
  return 2;
}
