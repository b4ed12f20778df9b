#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mobo/search_space.hpp"

namespace mobo {
namespace {

Configuration pinned_kws() {
  return Configuration({std::int64_t{1}, std::int64_t{16}, std::int64_t{16}, std::int64_t{16}, std::int64_t{3},
                        std::int64_t{1}, 0.25, false, std::int64_t{1}, std::int64_t{32}, std::int64_t{32},
                        std::int64_t{32}});
}

TEST(SearchSpace, KwsDefaultShape) {
  const auto space = SearchSpace::kws_default();
  EXPECT_EQ(space.size(), 12u);
  EXPECT_EQ(space.encoded_size(), 13u);  // kernel_size one-hot over {3, 5}
  EXPECT_EQ(space.discrete_cardinality(), 3ull * 7 * 7 * 7 * 2 * 2 * 2 * 3 * 8 * 8 * 8);
  EXPECT_EQ(space.index_of("dropout"), 6u);
  EXPECT_FALSE(space.index_of("nope").has_value());
}

TEST(SearchSpace, RejectsMalformedDimensions) {
  EXPECT_THROW(SearchSpace(std::vector<DimensionSpec>{}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", IntegerRange{0, 10, 0}}}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", IntegerRange{5, 1, 1}}}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", IntegerRange{0, 10, 3}}}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", Categorical{{3}}}}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", Categorical{{3, 3}}}}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", ContinuousRange{1.0, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(SearchSpace({{"a", Boolean{}}, {"a", Boolean{}}}), std::invalid_argument);
}

TEST(SearchSpace, ValidateNamesOffendingDimension) {
  const auto space = SearchSpace::kws_default();
  std::vector<DimensionValue> v = pinned_kws().values();
  v[1] = std::int64_t{17};  // off the step-8 grid
  try {
    space.validate(Configuration(v));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("filters_1"), std::string::npos);
  }
  v = pinned_kws().values();
  v[6] = std::int64_t{0};  // wrong value type for a continuous dimension
  EXPECT_FALSE(space.contains(Configuration(v)));
  EXPECT_TRUE(space.contains(pinned_kws()));
}

TEST(SearchSpace, ConfigurationIdIsStable) {
  // FNV-1a over (variant index, 8 value bytes) per dimension, computed independently.
  EXPECT_EQ(pinned_kws().id(), 0xbfeb1aac4d8d60c5ULL);
  const Configuration a({std::int64_t{-3}, -0.0, true});
  const Configuration b({std::int64_t{-3}, 0.0, true});
  EXPECT_EQ(a.id(), 0xad5faca7fe7e5fbdULL);
  EXPECT_EQ(a.id(), b.id());
}

TEST(SearchSpace, EncodeDecodeRoundTrip) {
  const auto space = SearchSpace::kws_default();
  SeededStream rng(5);
  for (int i = 0; i < 500; ++i) {
    const Configuration cfg = sample_uniform(space, rng);
    ASSERT_TRUE(space.contains(cfg));
    const auto x = encode(space, cfg);
    ASSERT_EQ(x.size(), space.encoded_size());
    for (const double v : x) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const Configuration back = decode(space, x);
    EXPECT_EQ(back, cfg);
    EXPECT_EQ(back.id(), cfg.id());
  }
}

TEST(SearchSpace, EncodingOfPinnedConfig) {
  const auto space = SearchSpace::kws_default();
  const auto x = encode(space, pinned_kws());
  const std::vector<double> expected{0, 0, 0, 0, 1, 0, 0, 0.5, 0, 0, 0, 0, 0};
  ASSERT_EQ(x.size(), expected.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(x[i], expected[i]) << i;
}

TEST(SearchSpace, DecodeSnapsToNearestValue) {
  const SearchSpace space({{"n", IntegerRange{0, 10, 2}}, {"c", Categorical{{7, 8, 9}}}, {"b", Boolean{}}});
  const std::vector<double> x{0.33, 0.1, 0.7, 0.2, 0.6};
  const Configuration cfg = decode(space, x);
  EXPECT_EQ(std::get<std::int64_t>(cfg[0]), 4);  // 0.33 * 10 = 3.3 -> 4 on the even grid
  EXPECT_EQ(std::get<std::int64_t>(cfg[1]), 8);
  EXPECT_TRUE(std::get<bool>(cfg[2]));
}

TEST(SearchSpace, FromUnitPointMapsEachDomain) {
  const SearchSpace space(
      {{"n", IntegerRange{1, 3, 1}}, {"c", Categorical{{3, 5}}}, {"b", Boolean{}}, {"x", ContinuousRange{-1.0, 3.0}}});
  const std::vector<double> u{0.999, 0.49, 0.5, 0.25};
  const Configuration cfg = space.from_unit_point(u);
  EXPECT_EQ(std::get<std::int64_t>(cfg[0]), 3);
  EXPECT_EQ(std::get<std::int64_t>(cfg[1]), 3);
  EXPECT_TRUE(std::get<bool>(cfg[2]));
  EXPECT_DOUBLE_EQ(std::get<double>(cfg[3]), 0.0);
}

TEST(SearchSpace, UniformSamplingReachesEveryCategory) {
  const auto space = SearchSpace::kws_default();
  SeededStream rng(9);
  std::set<std::int64_t> filters, kernels;
  std::set<bool> bn;
  for (int i = 0; i < 400; ++i) {
    const auto cfg = sample_uniform(space, rng);
    filters.insert(std::get<std::int64_t>(cfg[1]));
    kernels.insert(std::get<std::int64_t>(cfg[4]));
    bn.insert(std::get<bool>(cfg[7]));
  }
  EXPECT_EQ(filters.size(), 7u);
  EXPECT_EQ(kernels.size(), 2u);
  EXPECT_EQ(bn.size(), 2u);
}

TEST(SearchSpace, PerturbChangesExactlyOneDimension) {
  const auto space = SearchSpace::kws_default();
  SeededStream rng(11);
  Configuration cfg = sample_uniform(space, rng);
  for (int i = 0; i < 1000; ++i) {
    const Configuration next = perturb(space, cfg, rng);
    ASSERT_TRUE(space.contains(next));
    int changed = 0;
    for (std::size_t d = 0; d < space.size(); ++d) changed += next[d] != cfg[d];
    EXPECT_EQ(changed, 1);
    cfg = next;
  }
}

TEST(SearchSpace, PerturbIntegerStepsAndFlipsAtBound) {
  const SearchSpace space({{"n", IntegerRange{0, 4, 2}}});
  SeededStream rng(3);
  const Configuration lo({std::int64_t{0}});
  const Configuration hi({std::int64_t{4}});
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(std::get<std::int64_t>(perturb(space, lo, rng)[0]), 2);
    EXPECT_EQ(std::get<std::int64_t>(perturb(space, hi, rng)[0]), 2);
  }
}

TEST(SearchSpace, DistanceIsEuclideanOnEncodings) {
  const auto space = SearchSpace::kws_default();
  SeededStream rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto a = sample_uniform(space, rng);
    const auto b = sample_uniform(space, rng);
    const auto xa = encode(space, a);
    const auto xb = encode(space, b);
    double s = 0.0;
    for (std::size_t k = 0; k < xa.size(); ++k) s += (xa[k] - xb[k]) * (xa[k] - xb[k]);
    EXPECT_NEAR(distance(space, a, b), std::sqrt(s), 1e-12);
    EXPECT_EQ(distance(space, a, a), 0.0);
  }
}

TEST(SearchSpace, JsonRoundTrip) {
  const auto space = SearchSpace::kws_default();
  EXPECT_EQ(search_space_from_json(to_json(space)), space);
  EXPECT_EQ(search_space_from_json(nlohmann::json{{"dims", to_json(space)}}), space);
  SeededStream rng(17);
  for (int i = 0; i < 50; ++i) {
    const auto cfg = sample_uniform(space, rng);
    EXPECT_EQ(configuration_from_json(space, to_json(space, cfg)), cfg);
  }
  EXPECT_THROW(configuration_from_json(space, nlohmann::json{{"conv_layers", 1}}), std::exception);
}

}  // namespace
}  // namespace mobo
