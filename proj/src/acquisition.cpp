#include "mobo/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

namespace mobo {

namespace {

double normal_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

}  // namespace

void AcquisitionState::validate() const {
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (!(front[i].f1 < ref.f1 && front[i].f2 < ref.f2)) {
      throw std::invalid_argument("acquisition state: front point does not dominate the reference point");
    }
    if (i > 0 && !(front[i - 1].f1 < front[i].f1 && front[i - 1].f2 > front[i].f2)) {
      throw std::invalid_argument("acquisition state: front must be ascending in f1 and descending in f2");
    }
  }
}

AcquisitionState make_acquisition_state(const ParetoFront& front, const ObjectiveVector& ref) {
  AcquisitionState state{front.objectives(), ref};
  state.validate();
  return state;
}

double expected_shortfall(double c, double mu, double sigma) {
  if (sigma <= 0.0) return std::max(0.0, c - mu);
  const double t = (c - mu) / sigma;
  return sigma * normal_pdf(t) + (c - mu) * normal_cdf(t);
}

double ehvi_exact(const AcquisitionState& state, const ObjectiveVector& mu, std::array<double, 2> sigma) {
  if (sigma[0] < 0.0 || sigma[1] < 0.0) throw std::invalid_argument("ehvi_exact: negative sigma");
  state.validate();
  const auto& front = state.front;
  const std::size_t k = front.size();

  double total = 0.0;
  double psi_prev = 0.0;  // psi1 at x_0 = -inf
  for (std::size_t i = 1; i <= k + 1; ++i) {
    const double x_i = i <= k ? front[i - 1].f1 : state.ref.f1;
    const double y_prev = i == 1 ? state.ref.f2 : front[i - 2].f2;
    const double psi_i = expected_shortfall(x_i, mu.f1, sigma[0]);
    const double width = psi_i - psi_prev;
    if (width > 0.0) total += width * expected_shortfall(y_prev, mu.f2, sigma[1]);
    psi_prev = psi_i;
  }
  return std::max(0.0, total);
}

Proposal propose_next(const SearchSpace& space, const ObjectiveBounds& bounds, const Archive& archive,
                      const GpModel& model_f1, const GpModel& model_f2, const AcquisitionOptions& options,
                      RandomStream& rng) {
  if (archive.empty()) throw std::invalid_argument("propose_next: archive is empty");
  if (options.pool_size == 0) throw std::invalid_argument("propose_next: pool_size must be positive");

  std::vector<ObjectiveVector> normalized;
  normalized.reserve(archive.size());
  for (const auto& e : archive.entries()) normalized.push_back(normalize_objectives(e.objectives, bounds).value);
  const AcquisitionState state = make_acquisition_state(non_dominated(normalized), options.ref);

  std::vector<Configuration> pool;
  std::vector<std::size_t> pool_index;
  std::unordered_set<std::uint64_t> seen;
  std::vector<double> rows;
  for (std::size_t i = 0; i < options.pool_size; ++i) {
    Configuration c = sample_uniform(space, rng);
    if (archive.contains(c.id()) || !seen.insert(c.id()).second) continue;
    const auto enc = encode(space, c);
    rows.insert(rows.end(), enc.begin(), enc.end());
    pool.push_back(std::move(c));
    pool_index.push_back(i);
  }

  if (pool.empty()) {
    for (std::size_t attempt = 0; attempt < options.max_fallback_draws; ++attempt) {
      Configuration c = sample_uniform(space, rng);
      if (!archive.contains(c.id())) return {std::move(c), 0.0, options.pool_size, 0, true};
    }
    throw SpaceExhausted("propose_next: no unevaluated configuration found; search space exhausted");
  }

  const auto p1 = model_f1.predict_many(rows);
  const auto p2 = model_f2.predict_many(rows);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::array<double, 2> sigma{options.sigma_scale * std::sqrt(p1[i].variance),
                                      options.sigma_scale * std::sqrt(p2[i].variance)};
    const double v = ehvi_exact(state, {p1[i].mean, p2[i].mean}, sigma);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return {pool[best], best_value, pool_index[best], pool.size(), false};
}

}  // namespace mobo
