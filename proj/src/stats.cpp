#include "mobo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace mobo {

namespace {

struct PooledRanks {
  std::vector<std::vector<double>> ranks;  // per group
  std::size_t n = 0;
  double tie_sum = 0.0;                    // sum over tie groups of t^3 - t
};

PooledRanks pooled_ranks(const GroupedSamples& samples) {
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pooled;
  for (std::size_t g = 0; g < samples.groups.size(); ++g) {
    const auto& values = samples.groups[g].second;
    for (std::size_t i = 0; i < values.size(); ++i) pooled.push_back({values[i], {g, i}});
  }
  std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  PooledRanks out;
  out.n = pooled.size();
  out.ranks.resize(samples.groups.size());
  for (std::size_t g = 0; g < samples.groups.size(); ++g) out.ranks[g].resize(samples.groups[g].second.size());

  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    const auto t = static_cast<double>(j - i);
    out.tie_sum += t * t * t - t;
    for (std::size_t q = i; q < j; ++q) out.ranks[pooled[q].second.first][pooled[q].second.second] = midrank;
    i = j;
  }
  return out;
}

double normal_upper_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace

std::size_t GroupedSamples::total() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.second.size();
  return n;
}

void GroupedSamples::validate() const {
  if (groups.size() < 2) throw std::invalid_argument("grouped samples need at least two groups");
  std::set<std::string> labels;
  for (const auto& [label, values] : groups) {
    if (!labels.insert(label).second) throw std::invalid_argument("duplicate group label: " + label);
    if (values.empty()) throw std::invalid_argument("empty group: " + label);
    for (const double v : values) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in group " + label);
    }
  }
  if (total() < groups.size() + 1) throw std::invalid_argument("need at least k + 1 observations in total");
}

KruskalWallisResult kruskal_wallis(const GroupedSamples& samples) {
  samples.validate();
  const PooledRanks pr = pooled_ranks(samples);
  const auto n = static_cast<double>(pr.n);
  const auto k = static_cast<double>(samples.groups.size());

  KruskalWallisResult out;
  const double tie_correction = 1.0 - pr.tie_sum / (n * n * n - n);
  if (tie_correction <= 0.0) {
    out.degenerate = true;
    out.h = 0.0;
    out.p_value = 1.0;
    out.eta_squared = (0.0 - k + 1.0) / (n - k);
    return out;
  }

  double sum = 0.0;
  for (const auto& r : pr.ranks) {
    const double rank_sum = std::accumulate(r.begin(), r.end(), 0.0);
    sum += rank_sum * rank_sum / static_cast<double>(r.size());
  }
  const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / tie_correction;
  out.h = std::max(0.0, h);
  out.p_value = std::clamp(boost::math::gamma_q(0.5 * (k - 1.0), 0.5 * out.h), 0.0, 1.0);
  out.eta_squared = (out.h - k + 1.0) / (n - k);
  return out;
}

std::vector<double> holm_adjust(std::span<const double> raw) {
  const std::size_t m = raw.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double v = std::min(1.0, static_cast<double>(m - r) * raw[order[r]]);
    running = std::max(running, v);
    adjusted[order[r]] = running;
  }
  return adjusted;
}

DunnResult dunn_holm(const GroupedSamples& samples) {
  samples.validate();
  const PooledRanks pr = pooled_ranks(samples);
  const std::size_t k = samples.groups.size();
  const auto n = static_cast<double>(pr.n);

  DunnResult out;
  out.raw.assign(k, std::vector<double>(k, 1.0));
  out.adjusted.assign(k, std::vector<double>(k, 1.0));

  const double variance = n * (n + 1.0) / 12.0 - pr.tie_sum / (12.0 * (n - 1.0));
  if (!(variance > 0.0)) {
    out.degenerate = true;
    return out;
  }

  std::vector<double> mean_rank(k);
  for (std::size_t g = 0; g < k; ++g) {
    mean_rank[g] = std::accumulate(pr.ranks[g].begin(), pr.ranks[g].end(), 0.0) / static_cast<double>(pr.ranks[g].size());
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> raw;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double se = std::sqrt(variance * (1.0 / static_cast<double>(pr.ranks[i].size()) +
                                              1.0 / static_cast<double>(pr.ranks[j].size())));
      const double z = (mean_rank[i] - mean_rank[j]) / se;
      pairs.push_back({i, j});
      raw.push_back(normal_upper_two_sided(z));
    }
  }
  const auto adjusted = holm_adjust(raw);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    out.raw[i][j] = out.raw[j][i] = raw[p];
    out.adjusted[i][j] = out.adjusted[j][i] = adjusted[p];
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

StatReport make_stat_report(const std::string& outcome, const GroupedSamples& samples) {
  StatReport report;
  report.outcome = outcome;
  report.kruskal = kruskal_wallis(samples);
  report.dunn = dunn_holm(samples);
  for (const auto& [label, values] : samples.groups) {
    report.labels.push_back(label);
    report.summaries.push_back({label, values.size(), quantile(values, 0.5), quantile(values, 0.25), quantile(values, 0.75)});
  }
  return report;
}

nlohmann::json to_json(const StatReport& report) {
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back({{"label", s.label}, {"n", s.n}, {"median", s.median}, {"q1", s.q1}, {"q3", s.q3},
                         {"iqr", s.q3 - s.q1}});
  }
  return {
      {"outcome", report.outcome},
      {"labels", report.labels},
      {"kruskal_wallis",
       {{"H", report.kruskal.h}, {"p_value", report.kruskal.p_value}, {"eta_squared", report.kruskal.eta_squared},
        {"degenerate", report.kruskal.degenerate}}},
      {"dunn", {{"raw", report.dunn.raw}, {"holm_adjusted", report.dunn.adjusted}, {"degenerate", report.dunn.degenerate}}},
      {"summaries", summaries},
  };
}

StatReport stat_report_from_json(const nlohmann::json& j) {
  StatReport r;
  r.outcome = j.at("outcome").get<std::string>();
  r.labels = j.at("labels").get<std::vector<std::string>>();
  const auto& kw = j.at("kruskal_wallis");
  r.kruskal = {kw.at("H").get<double>(), kw.at("p_value").get<double>(), kw.at("eta_squared").get<double>(),
               kw.at("degenerate").get<bool>()};
  const auto& dunn = j.at("dunn");
  r.dunn.raw = dunn.at("raw").get<std::vector<std::vector<double>>>();
  r.dunn.adjusted = dunn.at("holm_adjusted").get<std::vector<std::vector<double>>>();
  r.dunn.degenerate = dunn.at("degenerate").get<bool>();
  for (const auto& s : j.at("summaries")) {
    r.summaries.push_back({s.at("label").get<std::string>(), s.at("n").get<std::size_t>(), s.at("median").get<double>(),
                           s.at("q1").get<double>(), s.at("q3").get<double>()});
  }
  return r;
}

std::string render_dunn_matrix(const StatReport& report) {
  std::size_t width = 8;
  for (const auto& l : report.labels) width = std::max(width, l.size() + 2);
  std::ostringstream os;
  char cell[64];
  os << std::string(width, ' ');
  for (const auto& l : report.labels) os << std::string(width - l.size(), ' ') << l;
  os << '\n';
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    os << report.labels[i] << std::string(width - report.labels[i].size(), ' ');
    for (std::size_t j = 0; j < report.labels.size(); ++j) {
      std::snprintf(cell, sizeof cell, "%*.3f", static_cast<int>(width), report.dunn.adjusted[i][j]);
      os << cell;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mobo
