#include "mobo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mobo/random.hpp"

namespace mobo {

namespace {

constexpr std::uint64_t kJitterSalt = 0x6a09e667f3bcc908ULL;

std::size_t require_dim(const SearchSpace& space, const char* name) {
  const auto idx = space.index_of(name);
  if (!idx) throw std::invalid_argument(std::string("not a KWS search space: missing dimension ") + name);
  return *idx;
}

int int_value(const SearchSpace& space, const Configuration& cfg, const char* name) {
  const auto* v = std::get_if<std::int64_t>(&cfg[require_dim(space, name)]);
  if (v == nullptr) throw std::invalid_argument(std::string("KWS dimension is not integral: ") + name);
  return static_cast<int>(*v);
}

std::int64_t conv_params(int kernel, int in_channels, int out_channels, bool batch_norm) {
  std::int64_t p = static_cast<std::int64_t>(kernel) * kernel * in_channels * out_channels + out_channels;
  if (batch_norm) p += 4LL * out_channels;
  return p;
}

std::int64_t depthwise_params(int kernel, int channels, bool batch_norm) {
  std::int64_t p = static_cast<std::int64_t>(kernel) * kernel * channels + channels;
  if (batch_norm) p += 4LL * channels;
  return p;
}

std::int64_t dense_params(int in, int out) { return static_cast<std::int64_t>(in) * out + out; }

const char* const kFilterNames[3] = {"filters_1", "filters_2", "filters_3"};
const char* const kUnitNames[3] = {"units_1", "units_2", "units_3"};

KwsArchitecture extreme_architecture(bool largest) {
  KwsArchitecture a;
  a.conv_layers = largest ? 3 : 1;
  a.filters.fill(largest ? 64 : 16);
  a.kernel_size = largest ? 5 : 3;
  a.batch_norm = largest;
  a.dense_layers = largest ? 3 : 1;
  a.units.fill(largest ? 256 : 32);
  return a;
}

std::vector<Interval> benchmark_box(const std::string& name) {
  if (name == "schaffer-n1") return {{-1.0, 3.0}};
  if (name == "convex-quadratic-2d") return {{0.0, 1.0}, {0.0, 1.0}};
  throw std::invalid_argument("unknown benchmark problem: " + name);
}

// Grid indices map evenly onto the box; continuous values pass through.
std::vector<double> decision_point(const SearchSpace& space, const std::vector<Interval>& box,
                                   const Configuration& cfg) {
  space.validate(cfg);
  std::vector<double> x(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (const auto* r = std::get_if<IntegerRange>(&space.dims()[i].domain)) {
      const double t = static_cast<double>(std::get<std::int64_t>(cfg[i]) - r->lo) /
                       static_cast<double>(r->hi - r->lo);
      x[i] = box[i].lo + t * (box[i].hi - box[i].lo);
    } else {
      x[i] = std::get<double>(cfg[i]);
    }
  }
  return x;
}

}  // namespace

NormalizedObjective normalize_objectives(const ObjectiveVector& y, const ObjectiveBounds& bounds) {
  auto one = [](double v, const Interval& b, bool& clamped) {
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      throw std::invalid_argument("degenerate objective bounds");
    }
    const double t = (v - b.lo) / (b.hi - b.lo);
    if (t < 0.0 || t > 1.0) clamped = true;
    return std::clamp(t, 0.0, 1.0);
  };
  NormalizedObjective out;
  out.value.f1 = one(y.f1, bounds.f1, out.clamped);
  out.value.f2 = one(y.f2, bounds.f2, out.clamped);
  return out;
}

KwsArchitecture kws_architecture(const SearchSpace& space, const Configuration& cfg) {
  space.validate(cfg);
  KwsArchitecture a;
  a.conv_layers = int_value(space, cfg, "conv_layers");
  for (int j = 0; j < 3; ++j) a.filters[j] = int_value(space, cfg, kFilterNames[j]);
  a.kernel_size = int_value(space, cfg, "kernel_size");
  a.stride = int_value(space, cfg, "stride");
  a.dense_layers = int_value(space, cfg, "dense_layers");
  for (int j = 0; j < 3; ++j) a.units[j] = int_value(space, cfg, kUnitNames[j]);

  const auto* dropout = std::get_if<double>(&cfg[require_dim(space, "dropout")]);
  const auto* bn = std::get_if<bool>(&cfg[require_dim(space, "batch_norm")]);
  if (dropout == nullptr || bn == nullptr) throw std::invalid_argument("not a KWS search space: bad dropout/batch_norm");
  a.dropout = *dropout;
  a.batch_norm = *bn;
  if (a.conv_layers < 1 || a.conv_layers > 3 || a.dense_layers < 1 || a.dense_layers > 3) {
    throw std::invalid_argument("not a KWS search space: layer counts must lie in {1,2,3}");
  }
  return a;
}

std::int64_t dscnn_parameter_count(const KwsArchitecture& arch) {
  const int k = arch.kernel_size;
  std::int64_t p = conv_params(k, 1, arch.filters[0], arch.batch_norm);
  for (int j = 1; j < arch.conv_layers; ++j) {
    p += depthwise_params(k, arch.filters[j - 1], arch.batch_norm);
    p += conv_params(1, arch.filters[j - 1], arch.filters[j], arch.batch_norm);
  }
  int in = arch.filters[arch.conv_layers - 1];
  for (int j = 0; j < arch.dense_layers; ++j) {
    p += dense_params(in, arch.units[j]);
    in = arch.units[j];
  }
  return p + dense_params(in, kKwsClasses);
}

std::int64_t dscnn_size_bytes(const SearchSpace& space, const Configuration& cfg) {
  return 4 * dscnn_parameter_count(kws_architecture(space, cfg));
}

Configuration canonicalize_kws(const SearchSpace& space, const Configuration& cfg) {
  const KwsArchitecture a = kws_architecture(space, cfg);
  std::vector<DimensionValue> values = cfg.values();
  auto reset = [&](const char* name) {
    const std::size_t i = require_dim(space, name);
    values[i] = std::get<IntegerRange>(space.dims()[i].domain).lo;
  };
  for (int j = a.conv_layers; j < 3; ++j) reset(kFilterNames[j]);
  for (int j = a.dense_layers; j < 3; ++j) reset(kUnitNames[j]);
  return Configuration(std::move(values));
}

double synthetic_accuracy(const SearchSpace& space, const Configuration& cfg, const SyntheticAccuracyParams& params) {
  const KwsArchitecture a = kws_architecture(space, cfg);
  const double p = static_cast<double>(dscnn_parameter_count(a));
  const double m_kernel = a.kernel_size == 5 ? 1.0 : params.kernel3_factor;
  const double m_bn = a.batch_norm ? 1.0 : params.no_batch_norm_factor;
  const double dd = a.dropout - params.dropout_center;
  const double dropout_penalty = params.dropout_weight * dd * dd;

  const std::uint64_t h = splitmix64(canonicalize_kws(space, cfg).id() ^ kJitterSalt);
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  const double eps = params.jitter * (2.0 * u - 1.0);

  const double acc = params.a_max * (1.0 - std::exp(-p / params.p0)) * m_kernel * m_bn * (1.0 - dropout_penalty) + eps;
  return std::clamp(acc, 0.0, 1.0);
}

ObjectiveVector evaluate_kws(const SearchSpace& space, const Configuration& cfg, const SyntheticAccuracyParams& params) {
  return {-synthetic_accuracy(space, cfg, params), static_cast<double>(dscnn_size_bytes(space, cfg))};
}

bool is_valid_kws_objective(const ObjectiveVector& y) {
  return std::isfinite(y.f1) && std::isfinite(y.f2) && y.f1 >= -1.0 && y.f1 <= 0.0 && y.f2 > 0.0;
}

double kws_simulated_seconds(const SearchSpace& space, const Configuration& cfg) {
  const double p = static_cast<double>(dscnn_parameter_count(kws_architecture(space, cfg)));
  return 8.0 + 25.0 * p / 1e5;
}

ObjectiveProblem kws_problem(const SyntheticAccuracyParams& params) {
  ObjectiveProblem problem;
  problem.name = "kws";
  problem.space = SearchSpace::kws_default();
  const SearchSpace& space = problem.space;
  problem.evaluate = [space, params](const Configuration& cfg) { return evaluate_kws(space, cfg, params); };
  problem.cost_seconds = [space](const Configuration& cfg) { return kws_simulated_seconds(space, cfg); };
  problem.nominal_bounds.f1 = {-1.0, 0.0};
  problem.nominal_bounds.f2 = {4.0 * static_cast<double>(dscnn_parameter_count(extreme_architecture(false))),
                               4.0 * static_cast<double>(dscnn_parameter_count(extreme_architecture(true)))};
  problem.objective_names = {"neg_accuracy", "size_bytes"};
  problem.f1_is_negated_accuracy = true;
  return problem;
}

ObjectiveProblem benchmark_biobjective(const std::string& name, int grid_points) {
  if (grid_points == 1 || grid_points < 0) throw std::invalid_argument("grid_points must be 0 or >= 2");

  ObjectiveProblem problem;
  problem.name = name;
  problem.cost_seconds = [](const Configuration&) { return 1.0; };
  if (name == "schaffer-n1") {
    problem.nominal_bounds = {{0.0, 9.0}, {0.0, 9.0}};
  } else if (name == "convex-quadratic-2d") {
    problem.nominal_bounds = {{0.0, 2.0}, {0.0, 2.0}};
  } else {
    throw std::invalid_argument("unknown benchmark problem: " + name);
  }

  const std::vector<Interval> box = benchmark_box(name);
  std::vector<DimensionSpec> dims;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const std::string dim_name = "x" + std::to_string(i + 1);
    if (grid_points > 0) {
      dims.push_back({dim_name, IntegerRange{0, grid_points - 1, 1}});
    } else {
      dims.push_back({dim_name, ContinuousRange{box[i].lo, box[i].hi}});
    }
  }
  problem.space = SearchSpace(std::move(dims));

  const SearchSpace& space = problem.space;
  if (name == "schaffer-n1") {
    problem.evaluate = [space, box](const Configuration& cfg) {
      const double x = decision_point(space, box, cfg)[0];
      return ObjectiveVector{x * x, (x - 2.0) * (x - 2.0)};
    };
  } else {
    problem.evaluate = [space, box](const Configuration& cfg) {
      const auto x = decision_point(space, box, cfg);
      const double a = x[0] * x[0] + x[1] * x[1];
      const double b = (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 1.0) * (x[1] - 1.0);
      return ObjectiveVector{a, b};
    };
  }
  return problem;
}

std::vector<double> benchmark_point(const ObjectiveProblem& problem, const Configuration& cfg) {
  return decision_point(problem.space, benchmark_box(problem.name), cfg);
}

std::vector<std::string> problem_names() { return {"kws", "schaffer-n1", "convex-quadratic-2d"}; }

ObjectiveProblem make_problem(const std::string& name, const nlohmann::json& params) {
  if (name == "kws") {
    SyntheticAccuracyParams p;
    p.a_max = params.value("a_max", p.a_max);
    p.p0 = params.value("p0", p.p0);
    p.kernel3_factor = params.value("kernel3_factor", p.kernel3_factor);
    p.no_batch_norm_factor = params.value("no_batch_norm_factor", p.no_batch_norm_factor);
    p.dropout_weight = params.value("dropout_weight", p.dropout_weight);
    p.dropout_center = params.value("dropout_center", p.dropout_center);
    p.jitter = params.value("jitter", p.jitter);
    return kws_problem(p);
  }
  return benchmark_biobjective(name, params.value("grid_points", 0));
}

}  // namespace mobo
