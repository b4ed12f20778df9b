#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mobo/random.hpp"

namespace mobo {

/// Integer grid {lo, lo + step, ..., hi}. hi must be reachable from lo.
struct IntegerRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t step = 1;

  std::int64_t cardinality() const { return (hi - lo) / step + 1; }
  bool operator==(const IntegerRange&) const = default;
};

struct Categorical {
  std::vector<std::int64_t> choices;
  bool operator==(const Categorical&) const = default;
};

struct Boolean {
  bool operator==(const Boolean&) const = default;
};

struct ContinuousRange {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const ContinuousRange&) const = default;
};

using Domain = std::variant<IntegerRange, Categorical, Boolean, ContinuousRange>;

/// Value of one dimension. Integer ranges and categoricals hold int64,
/// continuous ranges hold double, booleans hold bool.
using DimensionValue = std::variant<std::int64_t, double, bool>;

struct DimensionSpec {
  std::string name;
  Domain domain;
  bool operator==(const DimensionSpec&) const = default;
};

/// A point of a search space. Immutable; `id()` is a stable FNV-1a hash of
/// the values, identical across processes and platforms.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<DimensionValue> values);

  const std::vector<DimensionValue>& values() const { return values_; }
  const DimensionValue& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  std::uint64_t id() const { return id_; }

  bool operator==(const Configuration& other) const { return values_ == other.values_; }

 private:
  std::vector<DimensionValue> values_;
  std::uint64_t id_ = 0;
};

std::uint64_t hash_values(std::span<const DimensionValue> values);

class SearchSpace {
 public:
  SearchSpace() = default;
  /// Throws std::invalid_argument when a dimension violates its domain rules
  /// or names repeat.
  explicit SearchSpace(std::vector<DimensionSpec> dims);

  /// Keyword-spotting DS-CNN space with dormant per-layer slots:
  /// conv_layers {1,2,3}; filters_1..3 {16..64 step 8}; kernel_size {3,5};
  /// stride {1,2}; dropout [0, 0.5]; batch_norm; dense_layers {1,2,3};
  /// units_1..3 {32..256 step 32}.
  static SearchSpace kws_default();

  const std::vector<DimensionSpec>& dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  std::size_t encoded_size() const { return encoded_size_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool contains(const Configuration& cfg) const;
  /// Throws std::invalid_argument naming the first offending dimension.
  void validate(const Configuration& cfg) const;

  /// Maps one coordinate per dimension from [0,1) onto the domain: grids by
  /// floor(u * cardinality), booleans by u >= 0.5, continuous affinely.
  Configuration from_unit_point(std::span<const double> u) const;

  /// Product of cardinalities of all non-continuous dimensions.
  std::uint64_t discrete_cardinality() const;

  bool operator==(const SearchSpace& other) const { return dims_ == other.dims_; }

 private:
  std::vector<DimensionSpec> dims_;
  std::size_t encoded_size_ = 0;
};

/// Number of distinct values of a discrete domain; 0 for continuous.
std::uint64_t domain_cardinality(const Domain& domain);

Configuration sample_uniform(const SearchSpace& space, RandomStream& rng);

/// Fixed-length embedding in [0,1]^d. Integer and continuous dimensions map
/// affinely, booleans to {0,1}, categoricals one-hot over their choices.
std::vector<double> encode(const SearchSpace& space, const Configuration& cfg);

/// Inverse of encode, snapping every coordinate to the nearest domain value
/// (argmax for one-hot blocks).
Configuration decode(const SearchSpace& space, std::span<const double> x);

/// Neighbour differing in exactly one uniformly chosen movable dimension.
/// Integers move one grid step (direction flipped at a bound), booleans flip,
/// categoricals resample a different choice, continuous values take a
/// Gaussian step of 0.1 * (hi - lo), clamped and redrawn if unchanged.
Configuration perturb(const SearchSpace& space, const Configuration& cfg, RandomStream& rng);

/// Euclidean distance between encodings.
double distance(const SearchSpace& space, const Configuration& a, const Configuration& b);

nlohmann::json to_json(const SearchSpace& space);
SearchSpace search_space_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SearchSpace& space, const Configuration& cfg);
Configuration configuration_from_json(const SearchSpace& space, const nlohmann::json& j);

}  // namespace mobo
