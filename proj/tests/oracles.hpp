#pragma once

// Independent reference computations for tests. Deliberately naive: no
// sorting tricks, no shared code with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "mobo/objectives.hpp"
#include "mobo/random.hpp"

namespace mobo::oracle {

inline bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

/// O(n^2): keep points no other point dominates, drop exact repeats.
inline std::vector<ObjectiveVector> non_dominated(const std::vector<ObjectiveVector>& pts) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = weakly_dominates(pts[j], pts[i]);
    if (dominated) continue;
    if (std::find(out.begin(), out.end(), pts[i]) == out.end()) out.push_back(pts[i]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.f1 < b.f1; });
  return out;
}

/// Exact area of the union of [p.f1, ref.f1] x [p.f2, ref.f2] by coordinate
/// compression: every elementary cell is tested against every rectangle.
inline double hv_rectangle_union(const std::vector<ObjectiveVector>& pts, const ObjectiveVector& ref) {
  std::set<double> xs{ref.f1}, ys{ref.f2};
  for (const auto& p : pts) {
    xs.insert(p.f1);
    ys.insert(p.f2);
  }
  const std::vector<double> X(xs.begin(), xs.end()), Y(ys.begin(), ys.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < X.size(); ++i) {
    for (std::size_t j = 0; j + 1 < Y.size(); ++j) {
      const double cx = 0.5 * (X[i] + X[i + 1]);
      const double cy = 0.5 * (Y[j] + Y[j + 1]);
      for (const auto& p : pts) {
        if (p.f1 <= cx && p.f2 <= cy && cx <= ref.f1 && cy <= ref.f2) {
          area += (X[i + 1] - X[i]) * (Y[j + 1] - Y[j]);
          break;
        }
      }
    }
  }
  return area;
}

/// Midpoint-grid estimate over [lo, ref]^2 with cells x cells cells.
inline double hv_grid(const std::vector<ObjectiveVector>& pts, const ObjectiveVector& ref, int cells,
                      double lo = 0.0) {
  const double hx = (ref.f1 - lo) / cells, hy = (ref.f2 - lo) / cells;
  long covered = 0;
  for (int i = 0; i < cells; ++i) {
    const double x = lo + (i + 0.5) * hx;
    // lowest f2 among points with f1 <= x
    double g = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
      if (p.f1 <= x) g = std::min(g, p.f2);
    }
    if (!std::isfinite(g)) continue;
    for (int j = 0; j < cells; ++j) covered += (lo + (j + 0.5) * hy) >= g;
  }
  return static_cast<double>(covered) * hx * hy;
}

/// Hypervolume gained by adding y: integral over x in [y.f1, ref.f1] of the
/// part of [y.f2, ref.f2] not already covered. `front` must be sorted by
/// ascending f1 (as non_dominated() returns it).
inline double hv_improvement(const std::vector<ObjectiveVector>& front, const ObjectiveVector& y,
                             const ObjectiveVector& ref) {
  if (y.f1 >= ref.f1 || y.f2 >= ref.f2) return 0.0;
  double level = ref.f2;  // lowest f2 among points left of the current x
  std::size_t i = 0;
  for (; i < front.size() && front[i].f1 <= y.f1; ++i) level = std::min(level, front[i].f2);
  double gain = 0.0;
  double x = y.f1;
  for (; i < front.size() && front[i].f1 < ref.f1; ++i) {
    gain += (front[i].f1 - x) * std::max(0.0, level - y.f2);
    level = std::min(level, front[i].f2);
    x = front[i].f1;
  }
  return gain + (ref.f1 - x) * std::max(0.0, level - y.f2);
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline MonteCarloEstimate ehvi_monte_carlo(const std::vector<ObjectiveVector>& front, const ObjectiveVector& mu,
                                           double s1, double s2, const ObjectiveVector& ref, std::size_t samples,
                                           std::uint64_t seed) {
  SeededStream rng(seed);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const ObjectiveVector y{mu.f1 + s1 * rng.normal(), mu.f2 + s2 * rng.normal()};
    const double v = hv_improvement(front, y, ref);
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sq / n - mean * mean);
  return {mean, std::sqrt(var / (n - 1.0))};
}

/// GD with every pairwise distance computed explicitly.
inline double gd_brute(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& ref) {
  double s = 0.0;
  for (const auto& p : front) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : ref) best = std::min(best, std::hypot(p.f1 - q.f1, p.f2 - q.f2));
    s += best * best;
  }
  return std::sqrt(s) / static_cast<double>(front.size());
}

struct DensePrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// GP posterior by forming K explicitly and solving with a full-pivot LU.
/// Targets are standardised the same way the model documents it.
inline std::vector<DensePrediction> gp_dense(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                             const std::vector<std::vector<double>>& query, double signal,
                                             double lengthscale, double noise_plus_jitter) {
  const auto n = static_cast<Eigen::Index>(x.size());
  double mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (const double v : y) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(y.size()));
  if (sd < 1e-12 * std::max(1.0, std::abs(mean))) sd = 1.0;

  auto k = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return signal * std::exp(-s / (2.0 * lengthscale * lengthscale));
  };
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ys(i) = (y[static_cast<std::size_t>(i)] - mean) / sd;
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = k(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
    K(i, i) += noise_plus_jitter;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  const Eigen::VectorXd alpha = lu.solve(ys);
  std::vector<DensePrediction> out;
  for (const auto& q : query) {
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) ks(i) = k(x[static_cast<std::size_t>(i)], q);
    const double m = ks.dot(alpha);
    const double v = signal - ks.dot(lu.solve(ks));
    out.push_back({m * sd + mean, std::max(0.0, v) * sd * sd});
  }
  return out;
}

/// Minimum pairwise Euclidean distance of a subset of points.
inline double min_pairwise(const std::vector<std::vector<double>>& pts, const std::vector<std::size_t>& subset) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < pts[subset[a]].size(); ++k) {
        const double d = pts[subset[a]][k] - pts[subset[b]][k];
        s += d * d;
      }
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

/// Calls f(subset) for every size-n subset of {0..m-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t m, std::size_t n, F&& f) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  if (n > m) return;
  while (true) {
    f(idx);
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == m - n + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace mobo::oracle
