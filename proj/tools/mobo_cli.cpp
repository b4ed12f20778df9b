// mobo: run, compare and report multi-objective BO initialisation experiments.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobo/harness.hpp"
#include "mobo/records.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitFailed = 1;

struct RunArgs {
  std::string problem = "kws";
  int grid_points = 0;
  std::string method = "random";
  std::uint64_t seed = 1;
  std::size_t budget = 60;
  std::size_t n_init = 10;
  int chains = -1;
  int iters = -1;
  double t_acc0 = -1.0, t_size0 = -1.0, alpha_acc = -1.0, alpha_size = -1.0;
  std::string fairness = "equal-total";
  std::size_t pool_size = 512;
  double ref_margin = 0.1;
  std::size_t checkpoint_every = 5;
  std::string out;
};

mobo::InitializerSpec initializer_from(const RunArgs& a) {
  const mobo::InitMethod m = mobo::method_from_name(a.method);
  mobo::InitializerSpec spec = mobo::default_initializer(m);
  spec.n_points = a.n_init;
  if (a.chains > 0) spec.oasi.n_chains = a.chains;
  if (a.iters > 0) spec.oasi.n_iter = a.iters;
  if (a.t_acc0 > 0) spec.oasi.t_acc0 = a.t_acc0;
  if (a.t_size0 > 0) spec.oasi.t_size0 = a.t_size0;
  if (a.alpha_acc > 0) spec.oasi.alpha_acc = a.alpha_acc;
  if (a.alpha_size > 0) spec.oasi.alpha_size = a.alpha_size;
  return spec;
}

fs::path resolve(const std::string& dir) {
  if (dir.empty()) return mobo::output_root();
  const fs::path p(dir);
  return (p.is_absolute() ? p : mobo::output_root() / p).lexically_normal();
}

int cmd_run(const RunArgs& a) {
  nlohmann::json params = nlohmann::json::object();
  if (a.grid_points > 0) params["grid_points"] = a.grid_points;
  mobo::ObjectiveProblem problem;
  mobo::InitializerSpec spec;
  mobo::RunOptions options;
  try {
    problem = mobo::make_problem(a.problem, params);
    spec = initializer_from(a);
    options.budget = a.budget;
    options.seed = a.seed;
    options.fairness = mobo::fairness_from_name(a.fairness);
    options.acquisition.pool_size = a.pool_size;
    options.acquisition.ref = {1.0 + a.ref_margin, 1.0 + a.ref_margin};
    options.checkpoint_every = a.checkpoint_every;
    mobo::validate_budget(spec, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  const fs::path dir = resolve(a.out);
  const std::string stem = a.problem + "_" + a.method + "_seed" + std::to_string(a.seed);
  try {
    mobo::RunRecord record = mobo::run_mobo(problem, spec, options);
    record.problem_params = params;
    const auto files = mobo::write_run(record, problem, dir, stem);
    std::cout << "hv " << record.final_hv << "  best_acc " << record.final_best_acc << "  best_J " << record.final_j
              << "  evaluations " << record.archive.size() << '\n'
              << files.record.string() << '\n'
              << files.archive.string() << '\n'
              << files.progression.string() << '\n';
  } catch (const mobo::RunAborted& e) {
    mobo::RunRecord partial = e.partial();
    partial.problem_params = params;
    const auto files = mobo::write_run(partial, problem, dir, stem + ".partial");
    std::cerr << "error: " << e.what() << "\npartial archive (" << partial.archive.size() << " evaluations) written to "
              << files.archive.string() << '\n';
    return kExitFailed;
  }
  return 0;
}

int cmd_compare(const std::string& config_file, std::size_t workers, bool strict, const std::string& out) {
  mobo::ExperimentConfig config;
  try {
    nlohmann::json j = nlohmann::json::object();
    if (!config_file.empty()) j = nlohmann::json::parse(mobo::read_text(config_file));
    if (!out.empty()) j["output_dir"] = out;
    config = mobo::experiment_from_json(j);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  try {
    mobo::CompareOptions options;
    options.workers = workers;
    options.strict = strict;
    options.log = &std::cerr;
    const auto result = mobo::run_compare(config, options);
    std::cout << mobo::render_report(result.report, mobo::ReportFormat::text, {"metrics", "stats", "ranking"})
              << "cells run " << result.executed << ", resumed " << result.resumed << "; output in "
              << config.output_dir.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& format, const std::vector<std::string>& tables,
               const std::string& outcome, std::size_t top_n) {
  try {
    const auto fmt = mobo::report_format_from_name(format);
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
      const fs::path p(in);
      if (fs::is_directory(p)) {
        const fs::path dir = fs::is_directory(p / "runs") ? p / "runs" : p;
        std::vector<fs::path> found;
        for (const auto& e : fs::directory_iterator(dir)) {
          const std::string name = e.path().filename().string();
          if (e.path().extension() == ".json" && name.find(".partial") == std::string::npos) found.push_back(e.path());
        }
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
      } else {
        files.push_back(p);
      }
    }
    if (files.empty()) throw std::invalid_argument("no run files given");
    std::vector<mobo::RunRecord> runs;
    for (const auto& f : files) runs.push_back(mobo::load_run(f));
    mobo::ReportOptions options;
    options.outcome = mobo::outcome_from_name(outcome);
    options.top_n = top_n;
    std::cout << mobo::render_report(mobo::build_report(runs, options), fmt, tables);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective Bayesian optimisation with objective-aware initialisation"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "one optimisation run; writes record JSON, archive JSONL, progression CSV");
  run_cmd->add_option("--problem", run.problem, "problem name (see `problems`)");
  run_cmd->add_option("--grid-points", run.grid_points, "discretise benchmark coordinates to this many values");
  run_cmd->add_option("--method", run.method, "random | lhs | sobol | oasi");
  run_cmd->add_option("--seed", run.seed, "run seed");
  run_cmd->add_option("--budget", run.budget, "total evaluations T");
  run_cmd->add_option("--n-init", run.n_init, "initial design size (oasi: diverse subset size)");
  run_cmd->add_option("--oasi-chains", run.chains, "annealing chains");
  run_cmd->add_option("--oasi-iter", run.iters, "iterations per chain");
  run_cmd->add_option("--t-acc0", run.t_acc0, "initial accuracy temperature");
  run_cmd->add_option("--t-size0", run.t_size0, "initial size temperature");
  run_cmd->add_option("--alpha-acc", run.alpha_acc, "accuracy cooling rate");
  run_cmd->add_option("--alpha-size", run.alpha_size, "size cooling rate");
  run_cmd->add_option("--fairness", run.fairness, "equal-total | equal-d0");
  run_cmd->add_option("--pool-size", run.pool_size, "EHVI candidate pool size");
  run_cmd->add_option("--ref-margin", run.ref_margin, "reference point = 1 + margin in both normalised objectives");
  run_cmd->add_option("--checkpoint-every", run.checkpoint_every, "progression checkpoint spacing");
  run_cmd->add_option("--out", run.out, "output directory (relative to $MOBO_OUTPUT_ROOT)");

  std::string config_file;
  std::size_t workers = 0;
  bool strict = false;
  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "methods x seeds comparison with metrics, statistics and ranking");
  compare_cmd->add_option("--config", config_file, "experiment JSON (defaults apply to missing keys)");
  compare_cmd->add_option("--workers", workers, "worker threads (0 = available parallelism)");
  compare_cmd->add_flag("--strict", strict, "fail on corrupt or stale run files instead of re-running them");
  compare_cmd->add_option("--out", compare_out, "override output_dir");

  std::vector<std::string> inputs;
  std::string format = "text";
  std::vector<std::string> tables;
  std::string outcome = "final_hv";
  std::size_t top_n = 5;
  auto* report_cmd = app.add_subcommand("report", "render tables from run record files or a compare directory");
  report_cmd->add_option("inputs", inputs, "run record JSON files or directories")->required();
  report_cmd->add_option("--format", format, "csv | json | text");
  report_cmd->add_option("--tables", tables, "metrics, stats, ranking, progression (default all)")->delimiter(',');
  report_cmd->add_option("--outcome", outcome, "final_hv | final_best_acc | final_J");
  report_cmd->add_option("--top", top_n, "ranking rows");

  auto* problems_cmd = app.add_subcommand("problems", "list problems");

  std::string space_problem = "kws";
  int space_grid = 0;
  auto* spaces_cmd = app.add_subcommand("spaces", "dump a problem's search space as JSON");
  spaces_cmd->add_option("--problem", space_problem, "problem name");
  spaces_cmd->add_option("--grid-points", space_grid, "benchmark discretisation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  if (*run_cmd) return cmd_run(run);
  if (*compare_cmd) return cmd_compare(config_file, workers, strict, compare_out);
  if (*report_cmd) return cmd_report(inputs, format, tables, outcome, top_n);
  if (*problems_cmd) {
    for (const auto& name : mobo::problem_names()) {
      const auto p = mobo::make_problem(name);
      std::cout << name << "  (" << p.space.size() << " dims; " << p.objective_names[0] << ", "
                << p.objective_names[1] << ")\n";
    }
    return 0;
  }
  if (*spaces_cmd) {
    try {
      nlohmann::json params = nlohmann::json::object();
      if (space_grid > 0) params["grid_points"] = space_grid;
      std::cout << mobo::to_json(mobo::make_problem(space_problem, params).space).dump(2) << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
    return 0;
  }
  return 0;
}
