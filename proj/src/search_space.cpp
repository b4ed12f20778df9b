#include "mobo/search_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mobo/simd/kernels.hpp"

namespace mobo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

std::size_t encoded_width(const Domain& domain) {
  if (const auto* cat = std::get_if<Categorical>(&domain)) return cat->choices.size();
  return 1;
}

void validate_dimension(const DimensionSpec& dim) {
  std::visit(Overloaded{
                 [&](const IntegerRange& r) {
                   if (r.step < 1) throw std::invalid_argument(dim.name + ": step must be >= 1");
                   if (r.lo > r.hi) throw std::invalid_argument(dim.name + ": lo > hi");
                   if ((r.hi - r.lo) % r.step != 0) {
                     throw std::invalid_argument(dim.name + ": hi not on the step grid");
                   }
                 },
                 [&](const Categorical& c) {
                   if (c.choices.size() < 2) {
                     throw std::invalid_argument(dim.name + ": categorical needs >= 2 choices");
                   }
                   std::set<std::int64_t> unique(c.choices.begin(), c.choices.end());
                   if (unique.size() != c.choices.size()) {
                     throw std::invalid_argument(dim.name + ": duplicate categorical choice");
                   }
                 },
                 [&](const Boolean&) {},
                 [&](const ContinuousRange& r) {
                   if (!(r.lo < r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
                     throw std::invalid_argument(dim.name + ": continuous range needs lo < hi");
                   }
                 },
             },
             dim.domain);
}

bool value_in_domain(const Domain& domain, const DimensionValue& value) {
  return std::visit(
      Overloaded{
          [&](const IntegerRange& r) {
            const auto* v = std::get_if<std::int64_t>(&value);
            return v != nullptr && *v >= r.lo && *v <= r.hi && (*v - r.lo) % r.step == 0;
          },
          [&](const Categorical& c) {
            const auto* v = std::get_if<std::int64_t>(&value);
            return v != nullptr && std::find(c.choices.begin(), c.choices.end(), *v) != c.choices.end();
          },
          [&](const Boolean&) { return std::holds_alternative<bool>(value); },
          [&](const ContinuousRange& r) {
            const auto* v = std::get_if<double>(&value);
            return v != nullptr && std::isfinite(*v) && *v >= r.lo && *v <= r.hi;
          },
      },
      domain);
}

std::size_t category_index(const Categorical& c, std::int64_t v) {
  return static_cast<std::size_t>(std::find(c.choices.begin(), c.choices.end(), v) - c.choices.begin());
}

}  // namespace

std::uint64_t hash_values(std::span<const DimensionValue> values) {
  std::uint64_t h = kFnvOffset;
  for (const auto& v : values) {
    fnv_mix(h, v.index());
    std::visit(Overloaded{
                   [&](std::int64_t x) { fnv_mix(h, static_cast<std::uint64_t>(x)); },
                   [&](double x) { fnv_mix(h, std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x)); },
                   [&](bool x) { fnv_mix(h, x ? 1U : 0U); },
               },
               v);
  }
  return h;
}

Configuration::Configuration(std::vector<DimensionValue> values)
    : values_(std::move(values)), id_(hash_values(values_)) {}

SearchSpace::SearchSpace(std::vector<DimensionSpec> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("search space needs at least one dimension");
  std::set<std::string> names;
  for (const auto& dim : dims_) {
    validate_dimension(dim);
    if (!names.insert(dim.name).second) {
      throw std::invalid_argument("duplicate dimension name: " + dim.name);
    }
    encoded_size_ += encoded_width(dim.domain);
  }
}

SearchSpace SearchSpace::kws_default() {
  const IntegerRange layers{1, 3, 1};
  const IntegerRange filters{16, 64, 8};
  const IntegerRange units{32, 256, 32};
  return SearchSpace({
      {"conv_layers", layers},
      {"filters_1", filters},
      {"filters_2", filters},
      {"filters_3", filters},
      {"kernel_size", Categorical{{3, 5}}},
      {"stride", IntegerRange{1, 2, 1}},
      {"dropout", ContinuousRange{0.0, 0.5}},
      {"batch_norm", Boolean{}},
      {"dense_layers", layers},
      {"units_1", units},
      {"units_2", units},
      {"units_3", units},
  });
}

std::optional<std::size_t> SearchSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].name == name) return i;
  }
  return std::nullopt;
}

bool SearchSpace::contains(const Configuration& cfg) const {
  if (cfg.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!value_in_domain(dims_[i].domain, cfg[i])) return false;
  }
  return true;
}

void SearchSpace::validate(const Configuration& cfg) const {
  if (cfg.size() != dims_.size()) {
    throw std::invalid_argument("configuration has " + std::to_string(cfg.size()) +
                                " values, space has " + std::to_string(dims_.size()) + " dimensions");
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!value_in_domain(dims_[i].domain, cfg[i])) {
      throw std::invalid_argument("value out of domain for dimension " + dims_[i].name);
    }
  }
}

Configuration SearchSpace::from_unit_point(std::span<const double> u) const {
  if (u.size() != dims_.size()) throw std::invalid_argument("from_unit_point: wrong point dimension");
  std::vector<DimensionValue> values;
  values.reserve(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const double x = std::clamp(u[i], 0.0, 1.0);
    auto grid_index = [x](std::int64_t card) {
      return std::min<std::int64_t>(static_cast<std::int64_t>(x * static_cast<double>(card)), card - 1);
    };
    std::visit(Overloaded{
                   [&](const IntegerRange& r) {
                     values.emplace_back(r.lo + r.step * grid_index(r.cardinality()));
                   },
                   [&](const Categorical& c) {
                     values.emplace_back(c.choices[grid_index(static_cast<std::int64_t>(c.choices.size()))]);
                   },
                   [&](const Boolean&) { values.emplace_back(x >= 0.5); },
                   [&](const ContinuousRange& r) { values.emplace_back(r.lo + x * (r.hi - r.lo)); },
               },
               dims_[i].domain);
  }
  return Configuration(std::move(values));
}

std::uint64_t domain_cardinality(const Domain& domain) {
  return std::visit(Overloaded{
                        [](const IntegerRange& r) { return static_cast<std::uint64_t>(r.cardinality()); },
                        [](const Categorical& c) { return static_cast<std::uint64_t>(c.choices.size()); },
                        [](const Boolean&) { return std::uint64_t{2}; },
                        [](const ContinuousRange&) { return std::uint64_t{0}; },
                    },
                    domain);
}

std::uint64_t SearchSpace::discrete_cardinality() const {
  std::uint64_t total = 1;
  for (const auto& dim : dims_) {
    if (const auto c = domain_cardinality(dim.domain); c > 0) total *= c;
  }
  return total;
}

Configuration sample_uniform(const SearchSpace& space, RandomStream& rng) {
  std::vector<double> u(space.size());
  for (auto& x : u) x = rng.uniform();
  return space.from_unit_point(u);
}

std::vector<double> encode(const SearchSpace& space, const Configuration& cfg) {
  space.validate(cfg);
  std::vector<double> out;
  out.reserve(space.encoded_size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::visit(Overloaded{
                   [&](const IntegerRange& r) {
                     const auto v = std::get<std::int64_t>(cfg[i]);
                     out.push_back(r.hi == r.lo ? 0.0
                                                : static_cast<double>(v - r.lo) / static_cast<double>(r.hi - r.lo));
                   },
                   [&](const Categorical& c) {
                     const std::size_t k = category_index(c, std::get<std::int64_t>(cfg[i]));
                     for (std::size_t j = 0; j < c.choices.size(); ++j) out.push_back(j == k ? 1.0 : 0.0);
                   },
                   [&](const Boolean&) { out.push_back(std::get<bool>(cfg[i]) ? 1.0 : 0.0); },
                   [&](const ContinuousRange& r) { out.push_back((std::get<double>(cfg[i]) - r.lo) / (r.hi - r.lo)); },
               },
               space.dims()[i].domain);
  }
  return out;
}

Configuration decode(const SearchSpace& space, std::span<const double> x) {
  if (x.size() != space.encoded_size()) throw std::invalid_argument("decode: wrong encoded dimension");
  std::vector<DimensionValue> values;
  values.reserve(space.size());
  std::size_t pos = 0;
  for (const auto& dim : space.dims()) {
    std::visit(Overloaded{
                   [&](const IntegerRange& r) {
                     const double steps = std::clamp(x[pos], 0.0, 1.0) * static_cast<double>(r.cardinality() - 1);
                     values.emplace_back(r.lo + r.step * static_cast<std::int64_t>(std::lround(steps)));
                     pos += 1;
                   },
                   [&](const Categorical& c) {
                     const auto first = x.begin() + static_cast<std::ptrdiff_t>(pos);
                     const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(c.choices.size()));
                     values.emplace_back(c.choices[static_cast<std::size_t>(best - first)]);
                     pos += c.choices.size();
                   },
                   [&](const Boolean&) {
                     values.emplace_back(x[pos] >= 0.5);
                     pos += 1;
                   },
                   [&](const ContinuousRange& r) {
                     values.emplace_back(r.lo + std::clamp(x[pos], 0.0, 1.0) * (r.hi - r.lo));
                     pos += 1;
                   },
               },
               dim.domain);
  }
  return Configuration(std::move(values));
}

Configuration perturb(const SearchSpace& space, const Configuration& cfg, RandomStream& rng) {
  space.validate(cfg);
  std::vector<std::size_t> movable;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& d = space.dims()[i].domain;
    if (std::holds_alternative<ContinuousRange>(d) || domain_cardinality(d) > 1) movable.push_back(i);
  }
  if (movable.empty()) throw std::invalid_argument("perturb: no dimension admits a move");

  const std::size_t dim = movable[rng.uniform_index(movable.size())];
  std::vector<DimensionValue> values = cfg.values();
  std::visit(Overloaded{
                 [&](const IntegerRange& r) {
                   const auto v = std::get<std::int64_t>(values[dim]);
                   std::int64_t next = v + (rng.uniform() < 0.5 ? -r.step : r.step);
                   if (next < r.lo || next > r.hi) next = 2 * v - next;
                   values[dim] = next;
                 },
                 [&](const Categorical& c) {
                   const std::size_t k = category_index(c, std::get<std::int64_t>(values[dim]));
                   std::size_t pick = rng.uniform_index(c.choices.size() - 1);
                   if (pick >= k) ++pick;
                   values[dim] = c.choices[pick];
                 },
                 [&](const Boolean&) { values[dim] = !std::get<bool>(values[dim]); },
                 [&](const ContinuousRange& r) {
                   const double v = std::get<double>(values[dim]);
                   const double scale = 0.1 * (r.hi - r.lo);
                   double next = v;
                   for (int attempt = 0; attempt < 64 && next == v; ++attempt) {
                     next = std::clamp(v + scale * rng.normal(), r.lo, r.hi);
                   }
                   if (next == v) next = v < 0.5 * (r.lo + r.hi) ? std::min(r.hi, v + scale) : std::max(r.lo, v - scale);
                   values[dim] = next;
                 },
             },
             space.dims()[dim].domain);
  return Configuration(std::move(values));
}

double distance(const SearchSpace& space, const Configuration& a, const Configuration& b) {
  const auto ea = encode(space, a);
  const auto eb = encode(space, b);
  return std::sqrt(simd::squared_distance(ea, eb));
}

nlohmann::json to_json(const SearchSpace& space) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& dim : space.dims()) {
    nlohmann::json entry;
    entry["name"] = dim.name;
    std::visit(Overloaded{
                   [&](const IntegerRange& r) {
                     entry["kind"] = "integer";
                     entry["params"] = {{"lo", r.lo}, {"hi", r.hi}, {"step", r.step}};
                   },
                   [&](const Categorical& c) {
                     entry["kind"] = "categorical";
                     entry["params"] = {{"choices", c.choices}};
                   },
                   [&](const Boolean&) {
                     entry["kind"] = "boolean";
                     entry["params"] = nlohmann::json::object();
                   },
                   [&](const ContinuousRange& r) {
                     entry["kind"] = "continuous";
                     entry["params"] = {{"lo", r.lo}, {"hi", r.hi}};
                   },
               },
               dim.domain);
    dims.push_back(std::move(entry));
  }
  return dims;
}

SearchSpace search_space_from_json(const nlohmann::json& j) {
  const nlohmann::json& dims = j.is_object() ? j.at("dims") : j;
  if (!dims.is_array()) throw std::invalid_argument("search space JSON must be an array of dimensions");
  std::vector<DimensionSpec> specs;
  for (const auto& entry : dims) {
    DimensionSpec spec;
    spec.name = entry.at("name").get<std::string>();
    const auto kind = entry.at("kind").get<std::string>();
    const nlohmann::json params = entry.value("params", nlohmann::json::object());
    if (kind == "integer") {
      spec.domain = IntegerRange{params.at("lo").get<std::int64_t>(), params.at("hi").get<std::int64_t>(),
                                 params.value("step", std::int64_t{1})};
    } else if (kind == "categorical") {
      spec.domain = Categorical{params.at("choices").get<std::vector<std::int64_t>>()};
    } else if (kind == "boolean") {
      spec.domain = Boolean{};
    } else if (kind == "continuous") {
      spec.domain = ContinuousRange{params.at("lo").get<double>(), params.at("hi").get<double>()};
    } else {
      throw std::invalid_argument("unknown dimension kind: " + kind);
    }
    specs.push_back(std::move(spec));
  }
  return SearchSpace(std::move(specs));
}

nlohmann::json to_json(const SearchSpace& space, const Configuration& cfg) {
  space.validate(cfg);
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::visit([&](const auto& v) { out[space.dims()[i].name] = v; }, cfg[i]);
  }
  return out;
}

Configuration configuration_from_json(const SearchSpace& space, const nlohmann::json& j) {
  std::vector<DimensionValue> values;
  values.reserve(space.size());
  for (const auto& dim : space.dims()) {
    const auto& v = j.at(dim.name);
    if (std::holds_alternative<Boolean>(dim.domain)) {
      values.emplace_back(v.get<bool>());
    } else if (std::holds_alternative<ContinuousRange>(dim.domain)) {
      values.emplace_back(v.get<double>());
    } else {
      values.emplace_back(v.get<std::int64_t>());
    }
  }
  Configuration cfg(std::move(values));
  space.validate(cfg);
  return cfg;
}

}  // namespace mobo
