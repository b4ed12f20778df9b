#include "mobo/mobo_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mobo/gp.hpp"

namespace mobo {

namespace {

constexpr std::uint64_t kProposalStream = 17;

void check_objectives(const ObjectiveVector& y, std::size_t eval_index) {
  if (!std::isfinite(y.f1) || !std::isfinite(y.f2)) {
    throw std::runtime_error("evaluation " + std::to_string(eval_index) + " returned a non-finite objective");
  }
}

}  // namespace

std::string_view fairness_name(Fairness f) { return f == Fairness::equal_total ? "equal-total" : "equal-d0"; }

Fairness fairness_from_name(std::string_view name) {
  if (name == "equal-total") return Fairness::equal_total;
  if (name == "equal-d0") return Fairness::equal_d0;
  throw std::invalid_argument("unknown fairness mode: " + std::string(name) + " (expected equal-total or equal-d0)");
}

std::size_t archived_init_count(const InitializerSpec& spec, Fairness fairness) {
  return fairness == Fairness::equal_total ? spec.evaluation_count() : spec.n_points;
}

void validate_budget(const InitializerSpec& spec, const RunOptions& options) {
  spec.validate();
  const std::size_t init = archived_init_count(spec, options.fairness);
  if (options.budget <= init) {
    throw std::invalid_argument("budget T = " + std::to_string(options.budget) + " must exceed the " +
                                std::string(method_name(spec.method)) + " initializer cost of " + std::to_string(init) +
                                " evaluations (" + std::string(fairness_name(options.fairness)) + ")");
  }
  if (options.checkpoint_every == 0) throw std::invalid_argument("checkpoint_every must be positive");
  if (options.acquisition.pool_size == 0) throw std::invalid_argument("pool_size must be positive");
  if (!(options.acquisition.ref.f1 > 1.0) || !(options.acquisition.ref.f2 > 1.0)) {
    throw std::invalid_argument("reference point must exceed 1 in both normalised objectives");
  }
}

void finalize_record(RunRecord& r) {
  std::vector<ObjectiveVector> normalized;
  std::vector<std::uint64_t> ids;
  for (const auto& e : r.archive.entries()) {
    normalized.push_back(normalize_objectives(e.objectives, r.bounds).value);
    ids.push_back(e.config.id());
  }
  r.front = non_dominated(normalized, ids);
  r.front.normalized = true;
  r.progression = progression_curves(r.archive, r.bounds, r.checkpoint_every, r.acquisition.ref);
  r.init_evaluations = static_cast<std::size_t>(std::count_if(
      r.archive.entries().begin(), r.archive.entries().end(), [](const ArchiveEntry& e) { return e.phase == Phase::init; }));
  r.simulated_time_s = r.archive.elapsed_s();
  if (!r.progression.empty()) {
    r.final_hv = r.progression.back().hypervolume;
    r.final_best_acc = r.progression.back().best_accuracy;
    r.final_j = r.progression.back().best_j;
  }
}

RunRecord run_mobo(const ObjectiveProblem& problem, const InitializerSpec& initializer, const RunOptions& options) {
  validate_budget(initializer, options);
  const auto started = std::chrono::steady_clock::now();

  RunRecord record;
  record.problem = problem.name;
  record.method = std::string(method_name(initializer.method));
  record.seed = options.seed;
  record.budget = options.budget;
  record.fairness = options.fairness;
  record.initializer = initializer;
  record.acquisition = options.acquisition;
  record.checkpoint_every = options.checkpoint_every;
  record.bounds = problem.nominal_bounds;

  auto abort = [&](const std::string& what) {
    finalize_record(record);
    record.real_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    throw RunAborted(what, record);
  };

  InitializationResult init;
  try {
    init = run_initializer(problem, initializer, options.seed);
  } catch (const std::exception& e) {
    abort(std::string("initializer failed: ") + e.what());
  }

  // Simulated clock over every initializer evaluation, archived or not.
  std::vector<double> clock(init.archive.size());
  double t = 0.0;
  for (std::size_t i = 0; i < init.archive.size(); ++i) {
    t += problem.cost_seconds(init.archive.entries[i].config);
    clock[i] = t;
  }
  const double init_time = t;

  std::vector<std::size_t> training;  // archive positions used to fit the surrogates
  try {
    if (options.fairness == Fairness::equal_total || initializer.method != InitMethod::oasi) {
      for (std::size_t i = 0; i < init.archive.size(); ++i) {
        const auto& e = init.archive.entries[i];
        check_objectives(e.objectives, i + 1);
        record.archive.append(e.config, e.objectives, clock[i], Phase::init);
      }
      training = init.training_indices;
    } else {
      std::vector<std::size_t> d0 = init.training_indices;
      std::sort(d0.begin(), d0.end());
      for (std::size_t k = 0; k < d0.size(); ++k) {
        const auto& e = init.archive.entries[d0[k]];
        check_objectives(e.objectives, k + 1);
        record.archive.append(e.config, e.objectives, clock[d0[k]], Phase::init);
        training.push_back(k);
      }
      record.overhead_evaluations = init.archive.size() - d0.size();
    }
  } catch (const std::exception& e) {
    abort(std::string("initializer failed: ") + e.what());
  }
  std::sort(training.begin(), training.end());
  record.training_seed = training;

  SeededStream rng(derive_seed(options.seed, kProposalStream));
  double now = std::max(init_time, record.archive.elapsed_s());
  while (record.archive.size() < options.budget) {
    std::vector<std::vector<double>> x;
    std::vector<double> y1;
    std::vector<double> y2;
    for (const std::size_t i : training) {
      const auto& e = record.archive[i];
      const ObjectiveVector n = normalize_objectives(e.objectives, record.bounds).value;
      x.push_back(encode(problem.space, e.config));
      y1.push_back(n.f1);
      y2.push_back(n.f2);
    }

    Proposal proposal;
    try {
      const GpModel gp1 = GpModel::fit(x, y1);
      const GpModel gp2 = GpModel::fit(x, y2);
      proposal = propose_next(problem.space, record.bounds, record.archive, gp1, gp2, options.acquisition, rng);
    } catch (const std::exception& e) {
      abort(std::string("proposal failed at evaluation ") + std::to_string(record.archive.size() + 1) + ": " + e.what());
    }
    if (proposal.fallback) ++record.fallback_proposals;

    ObjectiveVector y;
    try {
      y = problem.evaluate(proposal.config);
      check_objectives(y, record.archive.size() + 1);
      now += problem.cost_seconds(proposal.config);
    } catch (const std::exception& e) {
      abort(std::string("evaluation failed: ") + e.what());
    }
    record.archive.append(proposal.config, y, now, Phase::bo);
    training.push_back(record.archive.size() - 1);
  }

  finalize_record(record);
  record.real_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

}  // namespace mobo
