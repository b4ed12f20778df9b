#include "mobo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "mobo/records.hpp"

namespace mobo {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kAllTables{"metrics", "stats", "ranking", "progression"};

bool wants(const std::vector<std::string>& tables, const std::string& name) {
  return tables.empty() || std::find(tables.begin(), tables.end(), name) != tables.end();
}

double median(std::vector<double> v) { return v.empty() ? 0.0 : quantile(std::move(v), 0.5); }

std::vector<std::string> methods_in_order(const std::vector<RunRecord>& runs) {
  std::vector<std::string> out;
  for (const auto& r : runs) {
    if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  }
  return out;
}

std::string run_label(const RunRecord& r) { return r.method + "/seed" + std::to_string(r.seed); }

std::string pad(const std::string& s, std::size_t w, bool left = false) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return env && *env ? fs::path(env) : fs::path(".");
}

InitializerSpec default_initializer(InitMethod method) {
  InitializerSpec spec;
  spec.method = method;
  spec.n_points = 10;
  if (method == InitMethod::oasi) {
    spec.oasi.n_chains = 1;
    spec.oasi.n_iter = 40;
  }
  return spec;
}

InitializerSpec ExperimentConfig::initializer_for(InitMethod method) const {
  const auto it = initializers.find(method);
  return it == initializers.end() ? default_initializer(method) : it->second;
}

RunOptions ExperimentConfig::run_options(std::uint64_t seed) const {
  RunOptions o;
  o.budget = budget;
  o.seed = seed;
  o.fairness = fairness;
  o.checkpoint_every = checkpoint_every;
  o.acquisition.pool_size = pool_size;
  o.acquisition.ref = {1.0 + ref_margin, 1.0 + ref_margin};
  return o;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("experiment: methods must not be empty");
  if (seeds.empty()) throw std::invalid_argument("experiment: seeds must not be empty");
  if (std::set<InitMethod>(methods.begin(), methods.end()).size() != methods.size()) {
    throw std::invalid_argument("experiment: duplicate method");
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("experiment: duplicate seed");
  }
  if (!(ref_margin > 0.0)) throw std::invalid_argument("experiment: ref_margin must be positive");
  if (top_n == 0) throw std::invalid_argument("experiment: top_n must be positive");
  if (!(tchebycheff_weights[0] > 0.0) || !(tchebycheff_weights[1] > 0.0)) {
    throw std::invalid_argument("experiment: tchebycheff weights must be positive");
  }
  outcome_from_name(outcome);
  make_problem(problem, problem_params);
  for (const InitMethod m : methods) {
    InitializerSpec spec = initializer_for(m);
    if (spec.method != m) throw std::invalid_argument("experiment: initializer entry does not match its method");
    validate_budget(spec, run_options(0));
  }
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.problem = j.value("problem", c.problem);
  c.problem_params = j.value("problem_params", c.problem_params);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_name(m.get<std::string>()));
  }
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.budget = j.value("budget", c.budget);
  if (j.contains("initializers")) {
    for (const auto& [name, spec] : j.at("initializers").items()) {
      const InitMethod m = method_from_name(name);
      nlohmann::json full = to_json(default_initializer(m));
      full.merge_patch(spec);
      full["method"] = name;
      c.initializers[m] = initializer_spec_from_json(full);
    }
  }
  c.fairness = fairness_from_name(j.value("fairness", std::string(fairness_name(c.fairness))));
  fs::path out = j.value("output_dir", c.output_dir.string());
  c.output_dir = out.is_absolute() ? out : output_root() / out;
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  c.pool_size = j.value("pool_size", c.pool_size);
  c.ref_margin = j.value("ref_margin", c.ref_margin);
  c.outcome = j.value("outcome", c.outcome);
  if (j.contains("tchebycheff_weights")) c.tchebycheff_weights = j.at("tchebycheff_weights").get<std::array<double, 2>>();
  c.top_n = j.value("top_n", c.top_n);
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json methods = nlohmann::json::array();
  nlohmann::json inits = nlohmann::json::object();
  for (const InitMethod m : c.methods) {
    methods.push_back(method_name(m));
    inits[std::string(method_name(m))] = to_json(c.initializer_for(m));
  }
  return {{"problem", c.problem},
          {"problem_params", c.problem_params},
          {"methods", methods},
          {"seeds", c.seeds},
          {"budget", c.budget},
          {"initializers", inits},
          {"fairness", fairness_name(c.fairness)},
          {"output_dir", c.output_dir.string()},
          {"checkpoint_every", c.checkpoint_every},
          {"pool_size", c.pool_size},
          {"ref_margin", c.ref_margin},
          {"outcome", c.outcome},
          {"tchebycheff_weights", c.tchebycheff_weights},
          {"top_n", c.top_n}};
}

Outcome outcome_from_name(const std::string& name) {
  if (name == "final_hv") return Outcome::final_hv;
  if (name == "final_best_acc") return Outcome::final_best_acc;
  if (name == "final_J") return Outcome::final_j;
  throw std::invalid_argument("unknown outcome: " + name + " (expected final_hv, final_best_acc or final_J)");
}

double outcome_value(const RunRecord& run, Outcome outcome) {
  switch (outcome) {
    case Outcome::final_hv: return run.final_hv;
    case Outcome::final_best_acc: return run.final_best_acc;
    case Outcome::final_j: return run.final_j;
  }
  return 0.0;
}

StatReport compare_methods(const std::vector<RunRecord>& runs, Outcome outcome) {
  GroupedSamples samples;
  for (const auto& method : methods_in_order(runs)) {
    std::vector<double> values;
    for (const auto& r : runs) {
      if (r.method == method) values.push_back(outcome_value(r, outcome));
    }
    samples.groups.push_back({method, std::move(values)});
  }
  if (samples.groups.size() < 2) throw std::invalid_argument("compare_methods: need at least two methods");
  for (const auto& [label, values] : samples.groups) {
    if (values.size() < 3) {
      throw std::invalid_argument("compare_methods: method " + label + " has " + std::to_string(values.size()) +
                                  " runs, need at least 3");
    }
  }
  const char* names[] = {"final_hv", "final_best_acc", "final_J"};
  return make_stat_report(names[static_cast<int>(outcome)], samples);
}

ComparisonReport build_report(const std::vector<RunRecord>& runs, const ReportOptions& options) {
  if (runs.empty()) throw std::invalid_argument("build_report: no runs");
  ComparisonReport rep;
  rep.problem = runs.front().problem;
  rep.accuracy_objective = make_problem(runs.front().problem, runs.front().problem_params).f1_is_negated_accuracy;
  for (const auto& r : runs) {
    if (r.problem != rep.problem) throw std::invalid_argument("build_report: runs from different problems");
  }

  std::vector<ObjectiveVector> pooled;
  for (const auto& r : runs) {
    for (const auto& p : r.front.points) pooled.push_back(p.y);
  }
  rep.reference = non_dominated(pooled);
  rep.reference.normalized = true;
  for (const auto& r : runs) rep.run_gd.push_back(generational_distance(r.front, rep.reference));

  for (const auto& method : methods_in_order(runs)) {
    MethodMetrics m;
    m.method = method;
    std::vector<double> hv, gd, wall, acc, j;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].method != method) continue;
      ++m.runs;
      hv.push_back(runs[i].final_hv);
      gd.push_back(rep.run_gd[i]);
      wall.push_back(runs[i].simulated_time_s);
      acc.push_back(runs[i].final_best_acc);
      j.push_back(runs[i].final_j);
    }
    m.median_hv = median(hv);
    m.median_gd = median(gd);
    m.median_wall_time_s = median(wall);
    m.median_best_acc = median(acc);
    m.median_best_j = median(j);
    rep.metrics.push_back(m);

    // seed-averaged curve; runs of one method share checkpoints
    std::vector<ProgressionPoint> mean;
    std::size_t count = 0;
    for (const auto& r : runs) {
      if (r.method != method) continue;
      if (mean.empty()) mean.assign(r.progression.size(), {});
      if (r.progression.size() != mean.size()) throw std::invalid_argument("build_report: mismatched checkpoints");
      for (std::size_t k = 0; k < mean.size(); ++k) {
        mean[k].eval_index = r.progression[k].eval_index;
        mean[k].elapsed_s += r.progression[k].elapsed_s;
        mean[k].best_accuracy += r.progression[k].best_accuracy;
        mean[k].hypervolume += r.progression[k].hypervolume;
        mean[k].best_j += r.progression[k].best_j;
      }
      ++count;
    }
    for (auto& p : mean) {
      const auto n = static_cast<double>(count);
      p.elapsed_s /= n;
      p.best_accuracy /= n;
      p.hypervolume /= n;
      p.best_j /= n;
    }
    rep.mean_progression[method] = std::move(mean);
  }

  try {
    rep.stats = compare_methods(runs, options.outcome);
  } catch (const std::invalid_argument& e) {
    rep.stats_skipped = e.what();
  }

  std::vector<std::pair<std::string, ParetoFront>> fronts;
  for (const auto& r : runs) fronts.push_back({run_label(r), r.front});
  std::unordered_set<std::uint64_t> listed;
  for (const auto& entry : rank_tchebycheff(fronts, options.weights)) {
    if (rep.ranking.size() == options.top_n) break;
    if (!listed.insert(entry.id).second) continue;
    const RunRecord* owner = nullptr;
    for (const auto& r : runs) {
      if (run_label(r) == entry.label) owner = &r;
    }
    RankingRow row;
    row.rank = rep.ranking.size() + 1;
    row.score = entry.score;
    for (const auto& e : owner->archive.entries()) {
      if (e.config.id() == entry.id) {
        row.model = entry.label + "/eval" + std::to_string(e.eval_index);
        row.raw = e.objectives;
        break;
      }
    }
    rep.ranking.push_back(row);
  }
  return rep;
}

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown format: " + name + " (expected csv, json or text)");
}

std::string render_metrics_csv(const ComparisonReport& rep) {
  std::string out = "method,runs,median_hv,median_gd,median_wall_time_s,median_best_acc,median_best_J\n";
  for (const auto& m : rep.metrics) {
    out += m.method + ',' + std::to_string(m.runs) + ',' + format_number(m.median_hv) + ',' +
           format_number(m.median_gd) + ',' + format_number(m.median_wall_time_s) + ',' +
           format_number(m.median_best_acc) + ',' + format_number(m.median_best_j) + '\n';
  }
  return out;
}

std::string render_ranking_csv(const ComparisonReport& rep) {
  std::string out = rep.accuracy_objective ? "rank,model,accuracy,size_mb,score\n" : "rank,model,f1,f2,score\n";
  for (const auto& r : rep.ranking) {
    const double a = rep.accuracy_objective ? -r.raw.f1 : r.raw.f1;
    const double b = rep.accuracy_objective ? r.raw.f2 / 1e6 : r.raw.f2;
    out += std::to_string(r.rank) + ',' + r.model + ',' + format_number(a) + ',' + format_number(b) + ',' +
           format_number(r.score) + '\n';
  }
  return out;
}

nlohmann::json report_to_json(const ComparisonReport& rep, const std::vector<std::string>& tables) {
  nlohmann::json out = {{"problem", rep.problem}};
  if (wants(tables, "metrics")) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& m : rep.metrics) {
      rows.push_back({{"method", m.method},
                      {"runs", m.runs},
                      {"median_hv", m.median_hv},
                      {"median_gd", m.median_gd},
                      {"median_wall_time_s", m.median_wall_time_s},
                      {"median_best_acc", m.median_best_acc},
                      {"median_best_J", m.median_best_j}});
    }
    out["metrics"] = rows;
  }
  if (wants(tables, "stats")) {
    out["stats"] = rep.stats ? to_json(*rep.stats) : nlohmann::json{{"skipped", rep.stats_skipped}};
  }
  if (wants(tables, "ranking")) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.ranking) {
      nlohmann::json row = {{"rank", r.rank}, {"model", r.model}, {"score", r.score}};
      if (rep.accuracy_objective) {
        row["accuracy"] = -r.raw.f1;
        row["size_mb"] = r.raw.f2 / 1e6;
      } else {
        row["f1"] = r.raw.f1;
        row["f2"] = r.raw.f2;
      }
      rows.push_back(row);
    }
    out["ranking"] = rows;
  }
  if (wants(tables, "progression")) {
    nlohmann::json curves = nlohmann::json::object();
    for (const auto& [method, curve] : rep.mean_progression) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& p : curve) {
        rows.push_back({{"eval_index", p.eval_index},
                        {"elapsed_s", p.elapsed_s},
                        {"best_acc", p.best_accuracy},
                        {"hv", p.hypervolume},
                        {"best_J", p.best_j}});
      }
      curves[method] = rows;
    }
    out["progression"] = curves;
  }
  return out;
}

std::string render_report(const ComparisonReport& rep, ReportFormat format, const std::vector<std::string>& tables) {
  for (const auto& t : tables) {
    if (std::find(kAllTables.begin(), kAllTables.end(), t) == kAllTables.end()) {
      throw std::invalid_argument("unknown table: " + t + " (expected metrics, stats, ranking or progression)");
    }
  }
  if (format == ReportFormat::json) return report_to_json(rep, tables).dump(2) + "\n";

  std::ostringstream os;
  if (format == ReportFormat::csv) {
    if (wants(tables, "metrics")) os << "# metrics\n" << render_metrics_csv(rep) << '\n';
    if (wants(tables, "stats")) {
      os << "# stats\n";
      if (rep.stats) {
        const auto& s = *rep.stats;
        os << "outcome,H,p_value,eta_squared\n"
           << s.outcome << ',' << format_number(s.kruskal.h) << ',' << format_number(s.kruskal.p_value) << ','
           << format_number(s.kruskal.eta_squared) << "\n\n# dunn_holm\nmethod";
        for (const auto& l : s.labels) os << ',' << l;
        os << '\n';
        for (std::size_t i = 0; i < s.labels.size(); ++i) {
          os << s.labels[i];
          for (std::size_t j = 0; j < s.labels.size(); ++j) os << ',' << format_number(s.dunn.adjusted[i][j]);
          os << '\n';
        }
      } else {
        os << "skipped\n" << rep.stats_skipped << '\n';
      }
      os << '\n';
    }
    if (wants(tables, "ranking")) os << "# ranking\n" << render_ranking_csv(rep) << '\n';
    if (wants(tables, "progression")) {
      for (const auto& [method, curve] : rep.mean_progression) {
        os << "# progression " << method << '\n' << progression_to_csv(curve) << '\n';
      }
    }
    return os.str();
  }

  if (wants(tables, "metrics")) {
    os << "Metrics (" << rep.problem << ", medians over runs; wall time simulated)\n";
    os << pad("method", 10, true) << pad("runs", 6) << pad("HV", 10) << pad("GD", 10) << pad("wall_s", 12)
       << pad("best_acc", 10) << pad("best_J", 10) << '\n';
    for (const auto& m : rep.metrics) {
      os << pad(m.method, 10, true) << pad(std::to_string(m.runs), 6) << pad(fixed(m.median_hv, 4), 10)
         << pad(fixed(m.median_gd, 4), 10) << pad(fixed(m.median_wall_time_s, 1), 12)
         << pad(fixed(m.median_best_acc, 4), 10) << pad(fixed(m.median_best_j, 4), 10) << '\n';
    }
    os << '\n';
  }
  if (wants(tables, "stats")) {
    if (rep.stats) {
      const auto& s = *rep.stats;
      os << "Kruskal-Wallis on " << s.outcome << ": H = " << fixed(s.kruskal.h, 4) << ", p = "
         << fixed(s.kruskal.p_value, 4) << ", eta^2 = " << fixed(s.kruskal.eta_squared, 4)
         << (s.kruskal.degenerate ? " (all values tied)" : "") << '\n';
      os << "Dunn's test, Holm-adjusted p-values\n" << render_dunn_matrix(s);
    } else {
      os << "Statistics skipped: " << rep.stats_skipped << '\n';
    }
    os << '\n';
  }
  if (wants(tables, "ranking")) {
    os << "Tchebycheff ranking\n";
    os << pad("rank", 5) << "  " << pad("model", 26, true)
       << pad(rep.accuracy_objective ? "accuracy" : "f1", 12) << pad(rep.accuracy_objective ? "size_MB" : "f2", 12)
       << '\n';
    for (const auto& r : rep.ranking) {
      const double a = rep.accuracy_objective ? -r.raw.f1 : r.raw.f1;
      const double b = rep.accuracy_objective ? r.raw.f2 / 1e6 : r.raw.f2;
      os << pad(std::to_string(r.rank), 5) << "  " << pad(r.model, 26, true) << pad(fixed(a, 4), 12)
         << pad(fixed(b, rep.accuracy_objective ? 4 : 6), 12) << '\n';
    }
    os << '\n';
  }
  if (wants(tables, "progression")) {
    for (const auto& [method, curve] : rep.mean_progression) {
      os << "Progression (seed mean) " << method << '\n' << progression_to_csv(curve) << '\n';
    }
  }
  return os.str();
}

std::string run_stem(InitMethod method, std::uint64_t seed) {
  return std::string(method_name(method)) + "_seed" + std::to_string(seed);
}

bool run_matches(const RunRecord& run, const ExperimentConfig& config, InitMethod method, std::uint64_t seed) {
  const RunOptions o = config.run_options(seed);
  return run.problem == config.problem && run.problem_params == config.problem_params &&
         run.method == method_name(method) && run.seed == seed && run.budget == o.budget &&
         run.fairness == o.fairness && to_json(run.initializer) == to_json(config.initializer_for(method)) &&
         run.acquisition.pool_size == o.acquisition.pool_size && run.acquisition.ref == o.acquisition.ref &&
         run.checkpoint_every == o.checkpoint_every;
}

CompareResult run_compare(const ExperimentConfig& config, const CompareOptions& options) {
  config.validate();
  const ObjectiveProblem problem = make_problem(config.problem, config.problem_params);
  const fs::path runs_dir = config.output_dir / "runs";
  fs::create_directories(runs_dir);

  struct Cell {
    InitMethod method;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const InitMethod m : config.methods) {
    for (const std::uint64_t s : config.seeds) cells.push_back({m, s});
  }

  CompareResult result;
  result.runs.resize(cells.size());
  result.timing.resize(cells.size());
  std::vector<std::string> errors(cells.size());
  std::mutex log_mutex;
  auto log = [&](const std::string& line) {
    if (!options.log) return;
    std::lock_guard lock(log_mutex);
    *options.log << line << '\n';
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell cell = cells[i];
      const std::string stem = run_stem(cell.method, cell.seed);
      const RunFiles files = run_files(runs_dir, stem);
      CellTiming& timing = result.timing[i];
      timing.method = method_name(cell.method);
      timing.seed = cell.seed;
      try {
        if (fs::exists(files.record)) {
          try {
            RunRecord stored = load_run(files.record);
            if (!run_matches(stored, config, cell.method, cell.seed)) {
              throw std::runtime_error("stored run " + files.record.string() + " was produced by different settings");
            }
            timing.resumed = true;
            timing.simulated_time_s = stored.simulated_time_s;
            result.runs[i] = std::move(stored);
            log("resumed " + stem);
            continue;
          } catch (const std::exception& e) {
            if (options.strict) throw;
            log("re-running " + stem + ": " + e.what());
          }
        }
        RunRecord record;
        try {
          record = run_mobo(problem, config.initializer_for(cell.method), config.run_options(cell.seed));
        } catch (const RunAborted& e) {
          RunRecord partial = e.partial();
          partial.problem_params = config.problem_params;
          write_run(partial, problem, runs_dir, stem + ".partial");
          throw;
        }
        record.problem = config.problem;
        record.problem_params = config.problem_params;
        write_run(record, problem, runs_dir, stem);
        timing.real_time_s = record.real_time_s;
        timing.simulated_time_s = record.simulated_time_s;
        result.runs[i] = std::move(record);
        log("finished " + stem + " hv=" + fixed(result.runs[i].final_hv, 4));
      } catch (const std::exception& e) {
        errors[i] = stem + ": " + e.what();
      }
    }
  };

  std::size_t workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string failed;
  for (const auto& e : errors) {
    if (!e.empty()) failed += "\n  " + e;
  }
  if (!failed.empty()) throw std::runtime_error("comparison cells failed:" + failed);
  for (const auto& t : result.timing) (t.resumed ? result.resumed : result.executed)++;

  ReportOptions ro;
  ro.outcome = outcome_from_name(config.outcome);
  ro.weights = config.tchebycheff_weights;
  ro.top_n = config.top_n;
  result.report = build_report(result.runs, ro);
  const ComparisonReport& rep = result.report;

  const fs::path& out = config.output_dir;
  write_text_atomic(out / "metrics.csv", render_metrics_csv(rep));
  write_text_atomic(out / "stats.json", report_to_json(rep, {"stats"}).at("stats").dump(2) + "\n");
  write_text_atomic(out / "dunn.txt", render_report(rep, ReportFormat::text, {"stats"}));
  write_text_atomic(out / "tchebycheff.csv", render_ranking_csv(rep));
  write_text_atomic(out / "reference_front.json", front_to_json(rep.reference).dump(2) + "\n");
  for (const auto& [method, curve] : rep.mean_progression) {
    write_text_atomic(out / ("progression_" + method + ".csv"), progression_to_csv(curve));
  }
  write_text_atomic(out / "report.json", report_to_json(rep).dump(2) + "\n");

  std::string timing = "method,seed,resumed,real_time_s,simulated_time_s\n";
  for (const auto& t : result.timing) {
    timing += t.method + ',' + std::to_string(t.seed) + ',' + (t.resumed ? "1" : "0") + ',' +
              format_number(t.real_time_s) + ',' + format_number(t.simulated_time_s) + '\n';
  }
  write_text_atomic(out / "timing.csv", timing);
  return result;
}

}  // namespace mobo
