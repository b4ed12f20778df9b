#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "mobo/harness.hpp"
#include "mobo/records.hpp"

namespace mobo {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mobo_harness_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c;
  c.problem = "schaffer-n1";
  c.problem_params = {{"grid_points", 201}};
  c.methods = {InitMethod::random, InitMethod::lhs, InitMethod::oasi};
  c.seeds = {1, 2, 3};
  c.budget = 12;
  for (const auto m : c.methods) {
    InitializerSpec s = default_initializer(m);
    s.n_points = 4;
    if (m == InitMethod::oasi) {
      s.oasi.n_chains = 1;
      s.oasi.n_iter = 5;
    }
    c.initializers[m] = s;
  }
  c.pool_size = 64;
  c.checkpoint_every = 3;
  c.output_dir = out;
  return c;
}

const std::vector<std::string> kDeterministicOutputs{
    "metrics.csv", "stats.json", "dunn.txt", "tchebycheff.csv", "reference_front.json", "report.json",
    "progression_random.csv", "progression_lhs.csv", "progression_oasi.csv"};

TEST(Harness, CompareWritesEveryArtifactAndResumes) {
  const auto dir = scratch_dir("compare");
  const auto cfg = small_config(dir);
  CompareOptions opt;
  opt.workers = 2;
  const auto first = run_compare(cfg, opt);
  EXPECT_EQ(first.executed, 9u);
  EXPECT_EQ(first.resumed, 0u);
  ASSERT_EQ(first.runs.size(), 9u);
  for (const auto& f : kDeterministicOutputs) EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_TRUE(fs::exists(dir / "timing.csv"));
  EXPECT_TRUE(fs::exists(dir / "runs" / "oasi_seed3.archive.jsonl"));

  std::map<std::string, std::string> before;
  for (const auto& f : kDeterministicOutputs) before[f] = read_text(dir / f);
  const std::string run_before = read_text(dir / "runs" / "lhs_seed2.archive.jsonl");

  const auto second = run_compare(cfg, opt);
  EXPECT_EQ(second.executed, 0u);
  EXPECT_EQ(second.resumed, 9u);
  for (const auto& f : kDeterministicOutputs) EXPECT_EQ(read_text(dir / f), before[f]) << f;

  // a corrupted cell is re-run in lenient mode and rejected in strict mode
  write_text_atomic(dir / "runs" / "lhs_seed2.archive.jsonl", "garbage\n");
  CompareOptions strict = opt;
  strict.strict = true;
  EXPECT_THROW(run_compare(cfg, strict), std::runtime_error);
  const auto third = run_compare(cfg, opt);
  EXPECT_EQ(third.executed, 1u);
  EXPECT_EQ(read_text(dir / "runs" / "lhs_seed2.archive.jsonl"), run_before);
  for (const auto& f : kDeterministicOutputs) EXPECT_EQ(read_text(dir / f), before[f]) << f;

  // different settings make stored runs stale
  auto changed = cfg;
  changed.budget = 13;
  const auto fourth = run_compare(changed, opt);
  EXPECT_EQ(fourth.executed, 9u);
  fs::remove_all(dir);
}

TEST(Harness, WorkerCountDoesNotChangeResults) {
  const auto a_dir = scratch_dir("w1"), b_dir = scratch_dir("w3");
  CompareOptions one, three;
  one.workers = 1;
  three.workers = 3;
  run_compare(small_config(a_dir), one);
  run_compare(small_config(b_dir), three);
  for (const auto& f : kDeterministicOutputs) EXPECT_EQ(read_text(a_dir / f), read_text(b_dir / f)) << f;
  fs::remove_all(a_dir);
  fs::remove_all(b_dir);
}

TEST(Harness, CellsAreIsolatedFromEachOther) {
  const auto dir = scratch_dir("isolated");
  const auto cfg = small_config(dir);
  const auto res = run_compare(cfg);
  const auto problem = make_problem(cfg.problem, cfg.problem_params);
  const auto alone = run_mobo(problem, cfg.initializer_for(InitMethod::oasi), cfg.run_options(2));
  const RunRecord* cell = nullptr;
  for (const auto& r : res.runs) {
    if (r.method == "oasi" && r.seed == 2) cell = &r;
  }
  ASSERT_NE(cell, nullptr);
  EXPECT_EQ(archive_to_jsonl(problem.space, cell->archive), archive_to_jsonl(problem.space, alone.archive));
  fs::remove_all(dir);
}

std::vector<RunRecord> load_runs(const CompareResult& res) { return res.runs; }

TEST(Harness, ReportTablesAndFormats) {
  const auto dir = scratch_dir("report");
  const auto res = run_compare(small_config(dir));
  const auto runs = load_runs(res);
  const auto report = build_report(runs, {});

  ASSERT_EQ(report.metrics.size(), 3u);
  EXPECT_EQ(report.metrics[0].method, "random");
  EXPECT_EQ(report.metrics[0].runs, 3u);
  ASSERT_TRUE(report.stats.has_value());
  EXPECT_EQ(report.stats->labels, (std::vector<std::string>{"random", "lhs", "oasi"}));
  ASSERT_LE(report.ranking.size(), 5u);
  for (std::size_t i = 0; i < report.ranking.size(); ++i) EXPECT_EQ(report.ranking[i].rank, i + 1);
  std::set<std::string> models;
  for (const auto& r : report.ranking) models.insert(r.model);
  EXPECT_EQ(models.size(), report.ranking.size());

  // GD of every run is non-negative and zero for some run contributing to the union
  ASSERT_EQ(report.run_gd.size(), runs.size());
  for (const double g : report.run_gd) EXPECT_GE(g, 0.0);

  // csv and json agree on the numbers
  const auto j = report_to_json(report);
  const std::string csv = render_metrics_csv(report);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "method,runs,median_hv,median_gd,median_wall_time_s,median_best_acc,median_best_J");
  for (std::size_t k = 0; k < 3; ++k) {
    ASSERT_TRUE(std::getline(in, line));
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    ASSERT_EQ(f.size(), 7u);
    EXPECT_EQ(f[0], report.metrics[k].method);
    EXPECT_EQ(std::stod(f[2]), j["metrics"][k]["median_hv"].get<double>());
    EXPECT_EQ(std::stod(f[3]), j["metrics"][k]["median_gd"].get<double>());
  }
  EXPECT_EQ(render_ranking_csv(report).substr(0, 24), "rank,model,f1,f2,score\n1");

  // rendering is idempotent and table selection works
  for (const auto fmt : {ReportFormat::csv, ReportFormat::json, ReportFormat::text}) {
    EXPECT_EQ(render_report(report, fmt), render_report(build_report(runs, {}), fmt));
  }
  const std::string only_metrics = render_report(report, ReportFormat::json, {"metrics"});
  const auto jm = nlohmann::json::parse(only_metrics);
  EXPECT_TRUE(jm.contains("metrics"));
  EXPECT_FALSE(jm.contains("ranking"));
  fs::remove_all(dir);
}

TEST(Harness, SingleRunHasZeroGdAndSkipsStats) {
  const auto dir = scratch_dir("single");
  auto cfg = small_config(dir);
  cfg.methods = {InitMethod::sobol};
  cfg.seeds = {4};
  const auto res = run_compare(cfg);
  ASSERT_EQ(res.report.metrics.size(), 1u);
  EXPECT_EQ(res.report.metrics[0].median_gd, 0.0);
  EXPECT_FALSE(res.report.stats.has_value());
  EXPECT_FALSE(res.report.stats_skipped.empty());
  EXPECT_LE(res.report.ranking.size(), 5u);
  fs::remove_all(dir);
}

RunRecord fake_run(const std::string& method, std::uint64_t seed, double hv) {
  RunRecord r;
  r.method = method;
  r.seed = seed;
  r.final_hv = hv;
  r.final_best_acc = hv / 2;
  r.final_j = 1 - hv;
  return r;
}

TEST(Harness, CompareMethodsGroupsByMethod) {
  std::vector<RunRecord> runs;
  const std::vector<std::pair<std::string, std::vector<double>>> groups{
      {"a", {2.0, 3.5, 3.5, 1.0, 7.0}}, {"b", {3.5, 5.0, 6.0, 6.0, 2.0, 8.0}}, {"c", {9.0, 7.0, 6.0, 10.0}}};
  std::uint64_t seed = 0;
  // interleave methods to check grouping does not depend on order
  for (std::size_t i = 0; i < 6; ++i) {
    for (const auto& [m, v] : groups) {
      if (i < v.size()) runs.push_back(fake_run(m, ++seed, v[i]));
    }
  }
  const auto rep = compare_methods(runs, Outcome::final_hv);
  EXPECT_EQ(rep.labels, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_NEAR(rep.kruskal.h, 6.241666666666677, 1e-9);
  EXPECT_NEAR(rep.dunn.adjusted[0][2], 0.03935052114525849, 1e-9);
  const auto by_j = compare_methods(runs, Outcome::final_j);
  EXPECT_NEAR(by_j.kruskal.h, rep.kruskal.h, 1e-12);  // decreasing transform, same ranks reversed

  std::vector<RunRecord> too_few{fake_run("a", 1, 1), fake_run("a", 2, 2), fake_run("b", 3, 3)};
  EXPECT_THROW(compare_methods(too_few, Outcome::final_hv), std::invalid_argument);
}

TEST(Harness, ExperimentConfigFromJson) {
  const auto cfg = experiment_from_json({{"problem", "kws"},
                                         {"methods", {"oasi", "lhs"}},
                                         {"seeds", {5, 6}},
                                         {"budget", 70},
                                         {"initializers", {{"oasi", {{"oasi", {{"n_iter", 30}}}}}}},
                                         {"output_dir", "/tmp/x"}});
  EXPECT_EQ(cfg.methods, (std::vector<InitMethod>{InitMethod::oasi, InitMethod::lhs}));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{5, 6}));
  EXPECT_EQ(cfg.budget, 70u);
  EXPECT_EQ(cfg.initializer_for(InitMethod::oasi).oasi.n_iter, 30);
  EXPECT_EQ(cfg.initializer_for(InitMethod::oasi).oasi.n_chains, default_initializer(InitMethod::oasi).oasi.n_chains);
  EXPECT_EQ(cfg.output_dir, fs::path("/tmp/x"));
  const auto rt = experiment_from_json(to_json(cfg));
  EXPECT_EQ(rt.budget, 70u);
  EXPECT_EQ(rt.methods, cfg.methods);

  EXPECT_THROW(experiment_from_json({{"budget", 5}}), std::invalid_argument);
  EXPECT_THROW(experiment_from_json({{"methods", {"halton"}}}), std::invalid_argument);
  EXPECT_THROW(experiment_from_json({{"outcome", "best"}}), std::invalid_argument);
}

TEST(Harness, DefaultExperimentFitsBudget) {
  const ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  for (const auto m : cfg.methods) EXPECT_LT(cfg.initializer_for(m).evaluation_count(), cfg.budget);
  EXPECT_EQ(cfg.run_options(3).acquisition.ref, (ObjectiveVector{1.1, 1.1}));
}

}  // namespace
}  // namespace mobo
