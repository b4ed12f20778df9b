#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobo/search_space.hpp"

namespace mobo {

/// Bi-objective value, both minimised. For the keyword-spotting problem
/// f1 = -accuracy in [-1, 0] and f2 = model size in bytes.
struct ObjectiveVector {
  double f1 = 0.0;
  double f2 = 0.0;

  bool operator==(const ObjectiveVector&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct ObjectiveBounds {
  Interval f1;
  Interval f2;
};

struct NormalizedObjective {
  ObjectiveVector value;
  bool clamped = false;
};

/// Affine map of each objective onto [0, 1] by `bounds`; values outside are
/// clamped and flagged. Throws std::invalid_argument unless lo < hi (finite).
NormalizedObjective normalize_objectives(const ObjectiveVector& y, const ObjectiveBounds& bounds);

/// A black-box bi-objective problem over a search space. `evaluate` must be
/// a pure function of the configuration; `cost_seconds` is the simulated
/// wall time charged per evaluation by the harness.
struct ObjectiveProblem {
  std::string name;
  SearchSpace space;
  std::function<ObjectiveVector(const Configuration&)> evaluate;
  ObjectiveBounds nominal_bounds;
  std::function<double(const Configuration&)> cost_seconds;
  std::array<std::string, 2> objective_names{"f1", "f2"};
  /// True when f1 is a negated accuracy (drives "best accuracy" reporting).
  bool f1_is_negated_accuracy = false;
};

// ---------------------------------------------------------------------------
// Keyword-spotting DS-CNN model.
//
// Parameter count, all layers with bias, float32 weights:
//   conv 1      standard K x K, 1 -> F1            K*K*F1 + F1
//   conv j>=2   depthwise K x K on F(j-1) channels  K*K*F(j-1) + F(j-1)
//               pointwise 1 x 1, F(j-1) -> Fj       F(j-1)*Fj + Fj
//   batch norm  (iff B) after every conv op         4 * output channels
//   pooling     global average                      0
//   dense       F(L) -> U1 -> ... -> U(NFC)         in*u + u per layer
//   classifier  U(NFC) -> 10                        in*10 + 10
// Size in bytes = 4 * parameter count.
// ---------------------------------------------------------------------------

inline constexpr int kKwsClasses = 10;

struct KwsArchitecture {
  int conv_layers = 1;
  std::array<int, 3> filters{16, 16, 16};
  int kernel_size = 3;
  int stride = 1;
  double dropout = 0.0;
  bool batch_norm = false;
  int dense_layers = 1;
  std::array<int, 3> units{32, 32, 32};
};

/// Reads the named KWS dimensions; throws std::invalid_argument when the
/// space is not a keyword-spotting space.
KwsArchitecture kws_architecture(const SearchSpace& space, const Configuration& cfg);

std::int64_t dscnn_parameter_count(const KwsArchitecture& arch);
std::int64_t dscnn_size_bytes(const SearchSpace& space, const Configuration& cfg);

/// Same configuration with dormant per-layer slots reset to their lower
/// bound. Objectives are functions of this canonical form only.
Configuration canonicalize_kws(const SearchSpace& space, const Configuration& cfg);

/// Constants of the synthetic accuracy surface. These are fixtures chosen to
/// give a saturating accuracy-versus-capacity trade-off; they are not
/// measured values.
struct SyntheticAccuracyParams {
  double a_max = 0.95;
  double p0 = 40000.0;
  double kernel3_factor = 0.99;
  double no_batch_norm_factor = 0.985;
  double dropout_weight = 0.1;
  double dropout_center = 0.25;
  double jitter = 0.01;
};

/// Acc = a_max * (1 - exp(-p / p0)) * m_K * m_B * (1 - w * (D - c)^2) + eps,
/// eps in [-jitter, jitter] hashed from the canonical configuration id,
/// clamped to [0, 1].
double synthetic_accuracy(const SearchSpace& space, const Configuration& cfg,
                          const SyntheticAccuracyParams& params = {});

ObjectiveVector evaluate_kws(const SearchSpace& space, const Configuration& cfg,
                             const SyntheticAccuracyParams& params = {});

bool is_valid_kws_objective(const ObjectiveVector& y);

/// Simulated training time for one KWS evaluation: 8 s + 25 s per 1e5
/// parameters. Fixture, not a measurement.
double kws_simulated_seconds(const SearchSpace& space, const Configuration& cfg);

ObjectiveProblem kws_problem(const SyntheticAccuracyParams& params = {});

/// Closed-form benchmarks with known Pareto fronts:
///   schaffer-n1          x in [-1, 3]; f = (x^2, (x-2)^2); Pareto set x in [0, 2]
///   convex-quadratic-2d  x in [0, 1]^2; f = (|x|^2, |x - (1,1)|^2);
///                        Pareto set is the diagonal segment
/// With grid_points > 0 each coordinate becomes an integer index over that
/// many evenly spaced values. Throws std::invalid_argument on unknown names.
ObjectiveProblem benchmark_biobjective(const std::string& name, int grid_points = 0);

/// Decision-space coordinates of a benchmark configuration.
std::vector<double> benchmark_point(const ObjectiveProblem& problem, const Configuration& cfg);

std::vector<std::string> problem_names();

/// Problem by name. `params` may carry "grid_points" for benchmarks or any
/// SyntheticAccuracyParams field (same names) for "kws".
ObjectiveProblem make_problem(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

}  // namespace mobo
