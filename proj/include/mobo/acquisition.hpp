#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mobo/archive.hpp"
#include "mobo/gp.hpp"
#include "mobo/objectives.hpp"
#include "mobo/pareto.hpp"
#include "mobo/random.hpp"
#include "mobo/search_space.hpp"

namespace mobo {

/// Normalised front (ascending f1, descending f2) and the reference point
/// it must strictly dominate.
struct AcquisitionState {
  std::vector<ObjectiveVector> front;
  ObjectiveVector ref = kDefaultReference;

  /// Throws std::invalid_argument if the ordering or dominance invariant fails.
  void validate() const;
};

AcquisitionState make_acquisition_state(const ParetoFront& front, const ObjectiveVector& ref = kDefaultReference);

/// E[(c - Z)^+] for Z ~ N(mu, sigma^2), i.e. sigma*phi(t) + (c - mu)*Phi(t)
/// with t = (c - mu)/sigma; max(0, c - mu) when sigma == 0.
double expected_shortfall(double c, double mu, double sigma);

/// Exact expected hypervolume improvement of an independent bivariate
/// Gaussian N(mu, diag(sigma^2)) over the state's front. Sums, over the k+1
/// f1-intervals [x_{i-1}, x_i] cut by the front (x_0 = -inf, x_{k+1} = ref.f1),
///   (psi1(x_i) - psi1(x_{i-1})) * psi2(y_{i-1}),   y_0 = ref.f2,
/// where psi is expected_shortfall. Zero sigma gives the deterministic
/// improvement.
double ehvi_exact(const AcquisitionState& state, const ObjectiveVector& mu, std::array<double, 2> sigma);

struct AcquisitionOptions {
  std::size_t pool_size = 512;
  ObjectiveVector ref = kDefaultReference;
  /// Multiplies posterior standard deviations (exploration knob for tests).
  double sigma_scale = 1.0;
  std::size_t max_fallback_draws = 100000;
};

struct Proposal {
  Configuration config;
  double ehvi = 0.0;
  std::size_t pool_index = 0;
  std::size_t candidates_scored = 0;
  bool fallback = false;
};

class SpaceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Draws a uniform candidate pool, drops configurations already in the
/// archive (and repeats within the pool), scores the rest by EHVI on the
/// normalised posteriors, and returns the first argmax. If every candidate
/// is a duplicate, returns a fresh unevaluated uniform draw; throws
/// SpaceExhausted when none is found within max_fallback_draws.
Proposal propose_next(const SearchSpace& space, const ObjectiveBounds& bounds, const Archive& archive,
                      const GpModel& model_f1, const GpModel& model_f2, const AcquisitionOptions& options,
                      RandomStream& rng);

}  // namespace mobo
