#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mobo/sobol.hpp"

namespace mobo {
namespace {

// Natural-order points 1..8 in 5 dimensions; values taken from scipy's
// unscrambled generator (Gray-code order, re-indexed).
const double kFirst8[8][5] = {
    {0.5, 0.5, 0.5, 0.5, 0.5},
    {0.25, 0.75, 0.75, 0.75, 0.25},
    {0.75, 0.25, 0.25, 0.25, 0.75},
    {0.125, 0.625, 0.375, 0.125, 0.125},
    {0.625, 0.125, 0.875, 0.625, 0.625},
    {0.375, 0.375, 0.625, 0.875, 0.375},
    {0.875, 0.875, 0.125, 0.375, 0.875},
    {0.0625, 0.9375, 0.5625, 0.3125, 0.6875},
};

TEST(Sobol, MatchesReferencePoints) {
  const SobolSequence s(5);
  const auto pts = s.first(8);
  ASSERT_EQ(pts.size(), 8u);
  for (int k = 0; k < 8; ++k) {
    for (int d = 0; d < 5; ++d) EXPECT_EQ(pts[k][d], kFirst8[k][d]) << "k=" << k + 1 << " d=" << d;
  }
}

TEST(Sobol, HighDimensionsMatchReference) {
  const SobolSequence s(21);
  const std::vector<double> p100{38, 198, 178, 246, 134, 18, 10, 150, 30, 254, 82,
                                 26, 206, 230, 238, 162, 194, 114, 250, 18, 86};
  const std::vector<double> p255{255, 1, 79, 141, 147, 209, 33, 163, 215, 77, 169,
                                 153, 21, 173, 235, 111, 173, 199, 73, 27, 255};
  const auto a = s.point(100);
  const auto b = s.point(255);
  for (int d = 0; d < 21; ++d) {
    EXPECT_EQ(a[d] * 256.0, p100[d]) << d;
    EXPECT_EQ(b[d] * 256.0, p255[d]) << d;
  }
}

TEST(Sobol, OriginIsSkipped) {
  const SobolSequence s(3);
  EXPECT_EQ(s.point(0), (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(s.first(1).front(), (std::vector<double>{0.5, 0.5, 0.5}));
}

// Every dyadic block of 2^m points (indices 0..2^m-1) puts exactly one point
// in each 1/2^m interval of every coordinate.
TEST(Sobol, OneDimensionalProjectionsAreStratified) {
  for (const std::optional<std::uint64_t> seed : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{77}}) {
    const SobolSequence s(21, seed);
    const int n = 256;
    for (std::size_t d = 0; d < 21; ++d) {
      std::set<int> cells;
      for (int k = 0; k < n; ++k) cells.insert(static_cast<int>(s.point(k)[d] * n));
      EXPECT_EQ(cells.size(), static_cast<std::size_t>(n)) << "dim " << d;
    }
  }
}

TEST(Sobol, ScrambleIsSeededAndStaysInUnitCube) {
  const SobolSequence a(4, 1), b(4, 1), c(4, 2);
  EXPECT_EQ(a.first(32), b.first(32));
  EXPECT_NE(a.first(32), c.first(32));
  for (const auto& p : a.first(64)) {
    for (const double v : p) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(Sobol, DimensionLimits) {
  EXPECT_THROW(SobolSequence(0), std::invalid_argument);
  EXPECT_THROW(SobolSequence(SobolSequence::kMaxDimensions + 1), std::invalid_argument);
}

}  // namespace
}  // namespace mobo
