#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mobo {

/// Labelled samples, one group per method.
struct GroupedSamples {
  std::vector<std::pair<std::string, std::vector<double>>> groups;

  std::size_t total() const;
  /// Labels distinct, groups non-empty, values finite, N >= k + 1.
  void validate() const;
};

struct KruskalWallisResult {
  double h = 0.0;
  double p_value = 1.0;
  double eta_squared = 0.0;
  bool degenerate = false;  // every pooled value identical
};

/// Midranks over the pooled sample, tie-corrected H, chi-square(k-1) upper
/// tail, eta^2 = (H - k + 1) / (N - k).
KruskalWallisResult kruskal_wallis(const GroupedSamples& samples);

/// Holm step-down adjustment with running-max monotonicity, capped at 1.
/// Output is in input order.
std::vector<double> holm_adjust(std::span<const double> raw);

struct DunnResult {
  std::vector<std::vector<double>> raw;       // k x k two-sided p-values
  std::vector<std::vector<double>> adjusted;  // Holm over the k(k-1)/2 pairs
  bool degenerate = false;                    // zero variance term
};

/// Dunn's pairwise z-tests on mean ranks with tie correction, two-sided,
/// Holm adjusted. Diagonals are 1.
DunnResult dunn_holm(const GroupedSamples& samples);

struct GroupSummary {
  std::string label;
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quantile (same rule as numpy's default).
double quantile(std::vector<double> values, double q);

struct StatReport {
  std::string outcome;
  std::vector<std::string> labels;
  KruskalWallisResult kruskal;
  DunnResult dunn;
  std::vector<GroupSummary> summaries;
};

StatReport make_stat_report(const std::string& outcome, const GroupedSamples& samples);

nlohmann::json to_json(const StatReport& report);
StatReport stat_report_from_json(const nlohmann::json& j);

/// Fixed-width matrix of adjusted p-values, labels on both axes.
std::string render_dunn_matrix(const StatReport& report);

}  // namespace mobo
