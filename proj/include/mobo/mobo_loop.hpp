#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobo/acquisition.hpp"
#include "mobo/archive.hpp"
#include "mobo/initializers.hpp"
#include "mobo/objectives.hpp"
#include "mobo/pareto.hpp"

namespace mobo {

/// How initializer evaluations are charged against the budget T.
///   equal_total  every initializer evaluation lives in the archive and
///                counts towards T (default)
///   equal_d0     only the surrogate seed set D0 enters the archive; extra
///                annealing evaluations are reported as overhead and their
///                simulated time is still charged
enum class Fairness { equal_total, equal_d0 };

std::string_view fairness_name(Fairness f);
Fairness fairness_from_name(std::string_view name);

struct RunOptions {
  std::size_t budget = 60;
  std::uint64_t seed = 0;
  Fairness fairness = Fairness::equal_total;
  AcquisitionOptions acquisition;
  std::size_t checkpoint_every = 5;
};

/// Number of archive entries the initializer contributes under `fairness`.
std::size_t archived_init_count(const InitializerSpec& spec, Fairness fairness);

/// Throws std::invalid_argument unless budget > archived_init_count. The
/// message names both numbers.
void validate_budget(const InitializerSpec& spec, const RunOptions& options);

struct RunRecord {
  std::string problem;
  nlohmann::json problem_params = nlohmann::json::object();
  std::string method;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  Fairness fairness = Fairness::equal_total;
  InitializerSpec initializer;
  AcquisitionOptions acquisition;
  std::size_t checkpoint_every = 5;
  ObjectiveBounds bounds;

  Archive archive;
  std::vector<std::size_t> training_seed;  // archive positions of D0
  ParetoFront front;                       // normalised, ids = config ids
  std::vector<ProgressionPoint> progression;

  std::size_t init_evaluations = 0;      // archive entries with phase init
  std::size_t overhead_evaluations = 0;  // initializer evaluations kept out of the archive
  std::size_t fallback_proposals = 0;
  double simulated_time_s = 0.0;
  double real_time_s = 0.0;              // not persisted; varies between runs

  double final_hv = 0.0;
  double final_best_acc = 0.0;
  double final_j = 0.0;
};

/// Raised when an evaluation fails mid-run; carries everything archived so far.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, RunRecord partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunRecord& partial() const { return partial_; }

 private:
  RunRecord partial_;
};

/// Initialise, then repeat fit two GPs -> propose by EHVI -> evaluate ->
/// append until the archive holds exactly `options.budget` entries.
/// Surrogates see normalised objectives on encoded configurations and are
/// refit from scratch every iteration. For oasi the training set is D0 plus
/// the BO evaluations; the EHVI front always uses the whole archive.
RunRecord run_mobo(const ObjectiveProblem& problem, const InitializerSpec& initializer, const RunOptions& options);

/// Recomputes front, progression and final summaries from record.archive.
void finalize_record(RunRecord& record);

}  // namespace mobo
