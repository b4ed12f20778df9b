#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobo/initializers.hpp"
#include "mobo/mobo_loop.hpp"
#include "mobo/pareto.hpp"
#include "mobo/stats.hpp"

namespace mobo {

/// Output root for relative output directories: $MOBO_OUTPUT_ROOT, else ".".
inline constexpr const char* kOutputRootEnv = "MOBO_OUTPUT_ROOT";
std::filesystem::path output_root();

/// Initializer settings used by comparisons unless overridden: 10 points for
/// every method; oasi runs one chain whose length fits inside a T = 60
/// budget.
InitializerSpec default_initializer(InitMethod method);

struct ExperimentConfig {
  std::string problem = "kws";
  nlohmann::json problem_params = nlohmann::json::object();
  std::vector<InitMethod> methods{InitMethod::random, InitMethod::lhs, InitMethod::sobol, InitMethod::oasi};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t budget = 60;
  std::map<InitMethod, InitializerSpec> initializers;  // falls back to default_initializer
  Fairness fairness = Fairness::equal_total;
  std::filesystem::path output_dir = "compare";
  std::size_t checkpoint_every = 5;
  std::size_t pool_size = 512;
  double ref_margin = 0.1;  // reference point = (1 + margin, 1 + margin)
  std::string outcome = "final_hv";
  std::array<double, 2> tchebycheff_weights{1.0, 1.0};
  std::size_t top_n = 5;

  InitializerSpec initializer_for(InitMethod method) const;
  RunOptions run_options(std::uint64_t seed) const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Missing keys keep their defaults. Relative output_dir values resolve
/// against output_root().
ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

enum class Outcome { final_hv, final_best_acc, final_j };
Outcome outcome_from_name(const std::string& name);
double outcome_value(const RunRecord& run, Outcome outcome);

/// Per-method outcome samples (methods in first-appearance order) through
/// Kruskal-Wallis and Dunn-Holm. Needs >= 2 methods and >= 3 runs each.
StatReport compare_methods(const std::vector<RunRecord>& runs, Outcome outcome);

struct MethodMetrics {
  std::string method;
  std::size_t runs = 0;
  double median_hv = 0.0;
  double median_gd = 0.0;
  double median_wall_time_s = 0.0;  // simulated evaluation time
  double median_best_acc = 0.0;
  double median_best_j = 0.0;
};

struct RankingRow {
  std::size_t rank = 0;
  std::string model;     // <method>/seed<s>/eval<k>
  ObjectiveVector raw;   // un-normalised objectives
  double score = 0.0;
};

struct ReportOptions {
  Outcome outcome = Outcome::final_hv;
  std::array<double, 2> weights{1.0, 1.0};
  std::size_t top_n = 5;
};

struct ComparisonReport {
  std::string problem;
  bool accuracy_objective = false;  // f1 is a negated accuracy, f2 bytes
  std::vector<MethodMetrics> metrics;
  std::vector<double> run_gd;       // per input run, against `reference`
  ParetoFront reference;            // non-dominated union of every run's front
  std::optional<StatReport> stats;
  std::string stats_skipped;        // reason when stats is empty
  std::vector<RankingRow> ranking;
  std::map<std::string, std::vector<ProgressionPoint>> mean_progression;
};

/// Pure function of the runs: metrics, GD against the union front,
/// statistics, Tchebycheff top-n (distinct configurations) and seed-averaged
/// progression curves.
ComparisonReport build_report(const std::vector<RunRecord>& runs, const ReportOptions& options);

enum class ReportFormat { csv, json, text };
ReportFormat report_format_from_name(const std::string& name);

/// Subset of {"metrics", "stats", "ranking", "progression"}; empty = all.
std::string render_report(const ComparisonReport& report, ReportFormat format,
                          const std::vector<std::string>& tables = {});

std::string render_metrics_csv(const ComparisonReport& report);
std::string render_ranking_csv(const ComparisonReport& report);
nlohmann::json report_to_json(const ComparisonReport& report, const std::vector<std::string>& tables = {});

struct CompareOptions {
  std::size_t workers = 0;  // 0 = hardware concurrency
  bool strict = false;      // corrupt or stale run files are an error instead of being re-run
  std::ostream* log = nullptr;
};

struct CellTiming {
  std::string method;
  std::uint64_t seed = 0;
  bool resumed = false;
  double real_time_s = 0.0;
  double simulated_time_s = 0.0;
};

struct CompareResult {
  ComparisonReport report;
  std::vector<RunRecord> runs;  // method-major, seed-minor
  std::vector<CellTiming> timing;
  std::size_t executed = 0;
  std::size_t resumed = 0;
};

/// Runs (or resumes) every (method, seed) cell on a worker pool, then writes
/// into config.output_dir:
///   runs/<method>_seed<s>.{json,archive.jsonl,progression.csv}
///   metrics.csv  stats.json  dunn.txt  tchebycheff.csv  reference_front.json
///   progression_<method>.csv  report.json  timing.csv
/// Everything except timing.csv is a deterministic function of the config.
CompareResult run_compare(const ExperimentConfig& config, const CompareOptions& options = {});

/// True when a stored run was produced by exactly these settings.
bool run_matches(const RunRecord& run, const ExperimentConfig& config, InitMethod method, std::uint64_t seed);

std::string run_stem(InitMethod method, std::uint64_t seed);

}  // namespace mobo
