#include "mobo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mobo {

std::vector<ObjectiveVector> ParetoFront::objectives() const {
  std::vector<ObjectiveVector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.y);
  return out;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.f1 <= b.f1 && a.f2 <= b.f2 && a != b;
}

ParetoFront non_dominated(std::span<const ObjectiveVector> points, std::span<const std::uint64_t> ids) {
  if (!ids.empty() && ids.size() != points.size()) {
    throw std::invalid_argument("non_dominated: ids and points differ in length");
  }
  for (const auto& p : points) {
    if (!std::isfinite(p.f1) || !std::isfinite(p.f2)) throw std::invalid_argument("non_dominated: non-finite objective");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].f1 != points[b].f1) return points[a].f1 < points[b].f1;
    return points[a].f2 < points[b].f2;
  });

  ParetoFront front;
  double best_f2 = std::numeric_limits<double>::infinity();
  for (const std::size_t i : order) {
    if (points[i].f2 < best_f2) {
      front.points.push_back({points[i], ids.empty() ? static_cast<std::uint64_t>(i) : ids[i]});
      best_f2 = points[i].f2;
    }
  }
  return front;
}

double hypervolume_2d(const ParetoFront& front, const ObjectiveVector& ref) {
  double area = 0.0;
  for (std::size_t i = 0; i < front.points.size(); ++i) {
    const ObjectiveVector& p = front.points[i].y;
    if (!(p.f1 < ref.f1 && p.f2 < ref.f2)) {
      throw std::invalid_argument("hypervolume_2d: front point does not strictly dominate the reference point");
    }
    if (i > 0) {
      const ObjectiveVector& prev = front.points[i - 1].y;
      if (!(prev.f1 < p.f1 && prev.f2 > p.f2)) throw std::invalid_argument("hypervolume_2d: front not sorted/non-dominated");
    }
    const double next_f1 = i + 1 < front.points.size() ? front.points[i + 1].y.f1 : ref.f1;
    area += (next_f1 - p.f1) * (ref.f2 - p.f2);
  }
  return area;
}

double generational_distance(const ParetoFront& front, const ParetoFront& reference_front) {
  if (front.empty() || reference_front.empty()) throw std::invalid_argument("generational_distance: empty front");
  double sum_sq = 0.0;
  for (const auto& p : front.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : reference_front.points) {
      const double d1 = p.y.f1 - r.y.f1;
      const double d2 = p.y.f2 - r.y.f2;
      best = std::min(best, d1 * d1 + d2 * d2);
    }
    sum_sq += best;
  }
  return std::sqrt(sum_sq) / static_cast<double>(front.size());
}

double scalarize_weighted(const ObjectiveVector& y, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("scalarize_weighted: lambda outside [0, 1]");
  return lambda * y.f1 + (1.0 - lambda) * y.f2;
}

std::vector<TchebycheffEntry> rank_tchebycheff(const std::vector<std::pair<std::string, ParetoFront>>& fronts,
                                               std::array<double, 2> weights, std::optional<ObjectiveVector> ideal) {
  if (!(weights[0] > 0.0 && weights[1] > 0.0)) throw std::invalid_argument("rank_tchebycheff: weights must be positive");
  std::vector<TchebycheffEntry> out;
  for (const auto& [label, front] : fronts) {
    for (const auto& p : front.points) out.push_back({label, p.id, p.y, 0.0});
  }
  if (out.empty()) throw std::invalid_argument("rank_tchebycheff: no points");

  ObjectiveVector z{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  if (ideal) {
    z = *ideal;
  } else {
    for (const auto& e : out) {
      z.f1 = std::min(z.f1, e.y.f1);
      z.f2 = std::min(z.f2, e.y.f2);
    }
  }
  for (auto& e : out) {
    e.score = std::max(weights[0] * std::abs(e.y.f1 - z.f1), weights[1] * std::abs(e.y.f2 - z.f2));
  }
  std::stable_sort(out.begin(), out.end(), [](const TchebycheffEntry& a, const TchebycheffEntry& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.y.f2 != b.y.f2) return a.y.f2 < b.y.f2;
    if (a.y.f1 != b.y.f1) return a.y.f1 < b.y.f1;
    return a.label < b.label;
  });
  return out;
}

std::vector<ProgressionPoint> progression_curves(const Archive& archive, const ObjectiveBounds& bounds,
                                                 std::size_t checkpoint_every, const ObjectiveVector& ref) {
  if (checkpoint_every == 0) throw std::invalid_argument("checkpoint_every must be positive");
  std::vector<ProgressionPoint> out;
  std::vector<ObjectiveVector> normalized;
  normalized.reserve(archive.size());
  double best_f1 = std::numeric_limits<double>::infinity();
  double best_j = std::numeric_limits<double>::infinity();
  for (const auto& e : archive.entries()) {
    const ObjectiveVector n = normalize_objectives(e.objectives, bounds).value;
    normalized.push_back(n);
    best_f1 = std::min(best_f1, e.objectives.f1);
    best_j = std::min(best_j, scalarize_weighted(n, 0.5));
    if (e.eval_index % checkpoint_every == 0 || e.eval_index == archive.size()) {
      out.push_back({e.eval_index, e.elapsed_s, -best_f1, hypervolume_2d(non_dominated(normalized), ref), best_j});
    }
  }
  return out;
}

}  // namespace mobo
