#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobo/objectives.hpp"
#include "mobo/random.hpp"
#include "mobo/search_space.hpp"

namespace mobo {

enum class InitMethod { random, lhs, sobol, oasi };

std::string_view method_name(InitMethod method);
InitMethod method_from_name(std::string_view name);

/// Annealing-chain parameters of the objective-aware seeder.
struct OasiParams {
  int n_chains = 5;
  int n_iter = 45;
  double t_acc0 = 0.05;
  double t_size0 = 0.1;
  double alpha_acc = 0.95;
  double alpha_size = 0.95;
};

struct InitializerSpec {
  InitMethod method = InitMethod::random;
  std::size_t n_points = 10;
  OasiParams oasi;

  /// Throws std::invalid_argument on n_points < 2, non-positive chain sizes
  /// or temperatures, cooling rates outside (0, 1), or chains too short to
  /// produce n_points evaluations.
  void validate() const;

  /// Objective evaluations the initializer spends: n_points, or
  /// n_chains * (n_iter + 1) for oasi.
  std::size_t evaluation_count() const;
};

nlohmann::json to_json(const InitializerSpec& spec);
InitializerSpec initializer_spec_from_json(const nlohmann::json& j);

struct InitEntry {
  Configuration config;
  ObjectiveVector objectives;
};

/// Every evaluation made during initialisation, in evaluation order.
struct InitArchive {
  std::vector<InitEntry> entries;
  std::size_t size() const { return entries.size(); }
};

InitArchive init_random(const ObjectiveProblem& problem, std::size_t n, RandomStream& rng);

/// Latin hypercube over one design coordinate per dimension: each coordinate
/// is split into n equal strata with one point per stratum, independently
/// permuted, then mapped onto the domain grid. Categoricals cycle through a
/// shuffled category order so counts differ by at most one.
InitArchive init_lhs(const ObjectiveProblem& problem, std::size_t n, RandomStream& rng);

/// Sobol points 1..n over one coordinate per dimension, mapped to the grid.
/// Scrambled by a digital shift when a seed is given.
InitArchive init_sobol(const ObjectiveProblem& problem, std::size_t n,
                       std::optional<std::uint64_t> scramble_seed);

struct AcceptanceProbabilities {
  double p_acc = 1.0;
  double p_size = 1.0;
  double joint() const { return p_acc * p_size; }
};

/// p_acc = 1 if a_next > a_curr else exp(-(a_curr - a_next) / t_acc);
/// p_size = 1 if s_next < s_curr else exp(-(s_next - s_curr) / t_size).
AcceptanceProbabilities acceptance_probabilities(double a_curr, double a_next, double s_curr, double s_next,
                                                 double t_acc, double t_size);

/// One annealing iteration, recorded for replay.
struct OasiStep {
  int chain = 0;
  int iteration = 0;          // 1-based within the chain
  double t_acc = 0.0;         // temperature used for this step
  double t_size = 0.0;
  AcceptanceProbabilities probabilities;
  double u1 = 0.0;
  double u2 = 0.0;
  bool accepted = false;
  std::size_t proposal_index = 0;  // archive index of the proposal
  std::size_t current_index = 0;   // archive index of the chain state after the step
};

struct OasiResult {
  InitArchive archive;
  std::vector<OasiStep> trace;
};

/// Runs n_chains independent annealing chains (Algorithm: random start,
/// n_iter perturbations, dual-temperature acceptance, geometric cooling per
/// iteration, temperatures reset per chain). Accuracy is -f1 and size is f2
/// normalised by the problem's nominal bounds. Each chain draws from its own
/// stream seeded from `rng` up front.
OasiResult init_oasi(const ObjectiveProblem& problem, const InitializerSpec& spec, RandomStream& rng);

struct DiverseSubset {
  std::vector<std::size_t> indices;  // into the input archive, in selection order
  bool short_of_request = false;     // fewer than n unique configurations
};

/// Greedy maximin in encoded design space. Duplicate configurations are
/// dropped (first occurrence kept); the seed is the lowest f1 (ties: lowest
/// f2, then earliest); each next pick maximises its minimum distance to the
/// selection (ties: earliest). Throws std::invalid_argument on an empty
/// archive or n == 0.
DiverseSubset select_diverse_subset(const InitArchive& archive, std::size_t n, const SearchSpace& space);

struct InitializationResult {
  InitArchive archive;                       // all evaluations
  std::vector<std::size_t> training_indices; // the surrogate seed set D0
};

/// Dispatches on spec.method with streams derived from `seed`.
InitializationResult run_initializer(const ObjectiveProblem& problem, const InitializerSpec& spec, std::uint64_t seed);

}  // namespace mobo
