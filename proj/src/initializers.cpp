#include "mobo/initializers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "mobo/simd/kernels.hpp"
#include "mobo/sobol.hpp"

namespace mobo {

namespace {

constexpr std::uint64_t kInitStream = 11;
constexpr std::uint64_t kSobolScrambleStream = 13;

void require_points(std::size_t n, const char* who) {
  if (n == 0) throw std::invalid_argument(std::string(who) + ": n must be positive");
}

InitEntry evaluate(const ObjectiveProblem& problem, Configuration cfg) {
  const ObjectiveVector y = problem.evaluate(cfg);
  return {std::move(cfg), y};
}

std::vector<std::size_t> shuffled_range(std::size_t n, RandomStream& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.uniform_index(i)]);
  return p;
}

}  // namespace

std::string_view method_name(InitMethod method) {
  switch (method) {
    case InitMethod::random: return "random";
    case InitMethod::lhs: return "lhs";
    case InitMethod::sobol: return "sobol";
    case InitMethod::oasi: return "oasi";
  }
  return "unknown";
}

InitMethod method_from_name(std::string_view name) {
  if (name == "random") return InitMethod::random;
  if (name == "lhs") return InitMethod::lhs;
  if (name == "sobol") return InitMethod::sobol;
  if (name == "oasi") return InitMethod::oasi;
  throw std::invalid_argument("unknown initializer method: " + std::string(name));
}

void InitializerSpec::validate() const {
  if (n_points < 2) throw std::invalid_argument("initializer n_points must be >= 2");
  if (method != InitMethod::oasi) return;
  if (oasi.n_chains < 1 || oasi.n_iter < 1) throw std::invalid_argument("oasi needs n_chains >= 1 and n_iter >= 1");
  if (!(oasi.t_acc0 > 0.0) || !(oasi.t_size0 > 0.0)) throw std::invalid_argument("oasi temperatures must be positive");
  auto in_unit = [](double a) { return a > 0.0 && a < 1.0; };
  if (!in_unit(oasi.alpha_acc) || !in_unit(oasi.alpha_size)) {
    throw std::invalid_argument("oasi cooling rates must lie in (0, 1)");
  }
  if (evaluation_count() < n_points) {
    throw std::invalid_argument("oasi chains produce " + std::to_string(evaluation_count()) +
                                " evaluations, fewer than n_points = " + std::to_string(n_points));
  }
}

std::size_t InitializerSpec::evaluation_count() const {
  if (method != InitMethod::oasi) return n_points;
  return static_cast<std::size_t>(oasi.n_chains) * static_cast<std::size_t>(oasi.n_iter + 1);
}

nlohmann::json to_json(const InitializerSpec& spec) {
  nlohmann::json j{{"method", method_name(spec.method)}, {"n_points", spec.n_points}};
  if (spec.method == InitMethod::oasi) {
    j["oasi"] = {{"n_chains", spec.oasi.n_chains}, {"n_iter", spec.oasi.n_iter},
                 {"t_acc0", spec.oasi.t_acc0},     {"t_size0", spec.oasi.t_size0},
                 {"alpha_acc", spec.oasi.alpha_acc}, {"alpha_size", spec.oasi.alpha_size}};
  }
  return j;
}

InitializerSpec initializer_spec_from_json(const nlohmann::json& j) {
  InitializerSpec spec;
  spec.method = method_from_name(j.at("method").get<std::string>());
  spec.n_points = j.value("n_points", spec.n_points);
  if (j.contains("oasi")) {
    const auto& o = j.at("oasi");
    spec.oasi.n_chains = o.value("n_chains", spec.oasi.n_chains);
    spec.oasi.n_iter = o.value("n_iter", spec.oasi.n_iter);
    spec.oasi.t_acc0 = o.value("t_acc0", spec.oasi.t_acc0);
    spec.oasi.t_size0 = o.value("t_size0", spec.oasi.t_size0);
    spec.oasi.alpha_acc = o.value("alpha_acc", spec.oasi.alpha_acc);
    spec.oasi.alpha_size = o.value("alpha_size", spec.oasi.alpha_size);
  }
  spec.validate();
  return spec;
}

InitArchive init_random(const ObjectiveProblem& problem, std::size_t n, RandomStream& rng) {
  require_points(n, "init_random");
  InitArchive out;
  for (std::size_t i = 0; i < n; ++i) out.entries.push_back(evaluate(problem, sample_uniform(problem.space, rng)));
  return out;
}

InitArchive init_lhs(const ObjectiveProblem& problem, std::size_t n, RandomStream& rng) {
  require_points(n, "init_lhs");
  const SearchSpace& space = problem.space;
  std::vector<std::vector<double>> u(n, std::vector<double>(space.size()));
  for (std::size_t d = 0; d < space.size(); ++d) {
    if (const auto* cat = std::get_if<Categorical>(&space.dims()[d].domain)) {
      const std::size_t c = cat->choices.size();
      const auto category_order = shuffled_range(c, rng);
      const auto slots = shuffled_range(n, rng);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t category = category_order[slots[i] % c];
        u[i][d] = (static_cast<double>(category) + 0.5) / static_cast<double>(c);
      }
    } else {
      const auto strata = shuffled_range(n, rng);
      for (std::size_t i = 0; i < n; ++i) {
        u[i][d] = (static_cast<double>(strata[i]) + rng.uniform()) / static_cast<double>(n);
      }
    }
  }
  InitArchive out;
  for (const auto& point : u) out.entries.push_back(evaluate(problem, space.from_unit_point(point)));
  return out;
}

InitArchive init_sobol(const ObjectiveProblem& problem, std::size_t n, std::optional<std::uint64_t> scramble_seed) {
  require_points(n, "init_sobol");
  const SobolSequence sobol(problem.space.size(), scramble_seed);
  InitArchive out;
  for (const auto& point : sobol.first(n)) out.entries.push_back(evaluate(problem, problem.space.from_unit_point(point)));
  return out;
}

AcceptanceProbabilities acceptance_probabilities(double a_curr, double a_next, double s_curr, double s_next,
                                                 double t_acc, double t_size) {
  AcceptanceProbabilities p;
  p.p_acc = a_next > a_curr ? 1.0 : std::exp(-(a_curr - a_next) / t_acc);
  p.p_size = s_next < s_curr ? 1.0 : std::exp(-(s_next - s_curr) / t_size);
  return p;
}

OasiResult init_oasi(const ObjectiveProblem& problem, const InitializerSpec& spec, RandomStream& rng) {
  if (spec.method != InitMethod::oasi) throw std::invalid_argument("init_oasi: spec.method must be oasi");
  spec.validate();
  const OasiParams& params = spec.oasi;

  // accuracy-like and size-like scores on the normalised scale
  auto accuracy = [&](const ObjectiveVector& y) { return -normalize_objectives(y, problem.nominal_bounds).value.f1; };
  auto size = [&](const ObjectiveVector& y) { return normalize_objectives(y, problem.nominal_bounds).value.f2; };

  std::vector<std::uint64_t> chain_seeds(static_cast<std::size_t>(params.n_chains));
  for (auto& s : chain_seeds) s = rng.bits();

  OasiResult result;
  result.archive.entries.reserve(spec.evaluation_count());
  for (int c = 0; c < params.n_chains; ++c) {
    SeededStream chain_rng(chain_seeds[static_cast<std::size_t>(c)]);
    double t_acc = params.t_acc0;
    double t_size = params.t_size0;

    result.archive.entries.push_back(evaluate(problem, sample_uniform(problem.space, chain_rng)));
    std::size_t current = result.archive.size() - 1;

    for (int i = 1; i <= params.n_iter; ++i) {
      const InitEntry& curr = result.archive.entries[current];
      InitEntry next = evaluate(problem, perturb(problem.space, curr.config, chain_rng));

      OasiStep step;
      step.chain = c;
      step.iteration = i;
      step.t_acc = t_acc;
      step.t_size = t_size;
      step.probabilities = acceptance_probabilities(accuracy(curr.objectives), accuracy(next.objectives),
                                                    size(curr.objectives), size(next.objectives), t_acc, t_size);
      step.u1 = chain_rng.uniform();
      step.u2 = chain_rng.uniform();
      step.accepted = step.u1 < step.probabilities.p_acc && step.u2 < step.probabilities.p_size;

      result.archive.entries.push_back(std::move(next));
      step.proposal_index = result.archive.size() - 1;
      if (step.accepted) current = step.proposal_index;
      step.current_index = current;
      result.trace.push_back(step);

      t_acc *= params.alpha_acc;
      t_size *= params.alpha_size;
    }
  }
  return result;
}

DiverseSubset select_diverse_subset(const InitArchive& archive, std::size_t n, const SearchSpace& space) {
  if (archive.entries.empty()) throw std::invalid_argument("select_diverse_subset: empty archive");
  if (n == 0) throw std::invalid_argument("select_diverse_subset: n must be positive");

  std::vector<std::size_t> unique;
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < archive.size(); ++i) {
    if (seen.insert(archive.entries[i].config.id()).second) unique.push_back(i);
  }

  DiverseSubset out;
  if (unique.size() <= n) {
    out.indices = unique;
    out.short_of_request = unique.size() < n;
    return out;
  }

  std::size_t seed = unique.front();
  for (const std::size_t i : unique) {
    const auto& a = archive.entries[i].objectives;
    const auto& b = archive.entries[seed].objectives;
    if (a.f1 < b.f1 || (a.f1 == b.f1 && a.f2 < b.f2)) seed = i;
  }

  std::vector<std::vector<double>> enc(archive.size());
  for (const std::size_t i : unique) enc[i] = encode(space, archive.entries[i].config);

  std::vector<double> min_dist(archive.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> taken(archive.size(), false);
  auto take = [&](std::size_t idx) {
    taken[idx] = true;
    out.indices.push_back(idx);
    for (const std::size_t i : unique) {
      if (!taken[i]) min_dist[i] = std::min(min_dist[i], std::sqrt(simd::squared_distance(enc[i], enc[idx])));
    }
  };

  take(seed);
  while (out.indices.size() < n) {
    std::size_t best = archive.size();
    for (const std::size_t i : unique) {
      if (!taken[i] && (best == archive.size() || min_dist[i] > min_dist[best])) best = i;
    }
    take(best);
  }
  return out;
}

InitializationResult run_initializer(const ObjectiveProblem& problem, const InitializerSpec& spec, std::uint64_t seed) {
  spec.validate();
  SeededStream rng(derive_seed(seed, kInitStream));
  InitializationResult out;
  switch (spec.method) {
    case InitMethod::random: out.archive = init_random(problem, spec.n_points, rng); break;
    case InitMethod::lhs: out.archive = init_lhs(problem, spec.n_points, rng); break;
    case InitMethod::sobol:
      out.archive = init_sobol(problem, spec.n_points, derive_seed(seed, kSobolScrambleStream));
      break;
    case InitMethod::oasi: {
      out.archive = init_oasi(problem, spec, rng).archive;
      out.training_indices = select_diverse_subset(out.archive, spec.n_points, problem.space).indices;
      return out;
    }
  }
  out.training_indices.resize(out.archive.size());
  std::iota(out.training_indices.begin(), out.training_indices.end(), 0);
  return out;
}

}  // namespace mobo
