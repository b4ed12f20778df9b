#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mobo/archive.hpp"
#include "mobo/objectives.hpp"

namespace mobo {

struct FrontPoint {
  ObjectiveVector y;
  std::uint64_t id = 0;
};

/// Mutually non-dominated points sorted by ascending f1 (hence strictly
/// descending f2), no duplicate objective vectors.
struct ParetoFront {
  std::vector<FrontPoint> points;
  bool normalized = false;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::vector<ObjectiveVector> objectives() const;
};

/// a <= b componentwise and a != b (minimisation).
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Maximal non-dominated subset. `ids` (same length as points, or empty for
/// positional ids) tag each point; exact duplicates keep the first id.
/// Throws std::invalid_argument on non-finite input.
ParetoFront non_dominated(std::span<const ObjectiveVector> points, std::span<const std::uint64_t> ids = {});

/// Default reference point for normalised objectives.
inline constexpr ObjectiveVector kDefaultReference{1.1, 1.1};

/// Exact dominated area up to `ref` by sorted sweep. Every point must
/// strictly dominate ref (std::invalid_argument otherwise).
double hypervolume_2d(const ParetoFront& front, const ObjectiveVector& ref);

/// (1/n) * sqrt(sum_i d_i^2), d_i the distance from front point i to its
/// nearest reference-front point.
double generational_distance(const ParetoFront& front, const ParetoFront& reference_front);

/// lambda * f1 + (1 - lambda) * f2. Throws when lambda is outside [0, 1].
double scalarize_weighted(const ObjectiveVector& y, double lambda);

struct TchebycheffEntry {
  std::string label;
  std::uint64_t id = 0;
  ObjectiveVector y;
  double score = 0.0;
};

/// Scores every point of every front by max_k w_k * |f_k - z_k| and sorts
/// ascending. z defaults to the componentwise minimum over all points. Ties
/// go to smaller f2, then smaller f1, then label order.
std::vector<TchebycheffEntry> rank_tchebycheff(const std::vector<std::pair<std::string, ParetoFront>>& fronts,
                                               std::array<double, 2> weights,
                                               std::optional<ObjectiveVector> ideal = std::nullopt);

struct ProgressionPoint {
  std::size_t eval_index = 0;
  double elapsed_s = 0.0;
  double best_accuracy = 0.0;  // -min f1 over the prefix
  double hypervolume = 0.0;    // of the normalised prefix front
  double best_j = 0.0;         // min of 0.5 f1 + 0.5 f2 (normalised) over the prefix
};

/// Running curves over the archive, sampled every `checkpoint_every`
/// evaluations and at the last one.
std::vector<ProgressionPoint> progression_curves(const Archive& archive, const ObjectiveBounds& bounds,
                                                 std::size_t checkpoint_every,
                                                 const ObjectiveVector& ref = kDefaultReference);

}  // namespace mobo
