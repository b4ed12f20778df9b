#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace mobo {

/// Sobol low-discrepancy sequence from the Joe-Kuo (new-joe-kuo-6.21201)
/// direction numbers.
///
/// Points are generated in natural order: point k is the XOR of the direction
/// vectors selected by the set bits of k, so point 0 is the origin and the
/// one-dimensional sequence reads 0, 1/2, 1/4, 3/4, 1/8, ... Callers that
/// want "the first n points" use first(n), which drops the origin and returns
/// points 1..n. An optional random digital shift XORs every coordinate with a
/// seeded 32-bit mask; it preserves the (t,m,s)-net structure.
class SobolSequence {
 public:
  static constexpr std::size_t kMaxDimensions = 21;
  static constexpr int kBits = 32;

  /// Throws std::invalid_argument if dims is 0 or exceeds kMaxDimensions.
  explicit SobolSequence(std::size_t dims, std::optional<std::uint64_t> scramble_seed = std::nullopt);

  std::size_t dimensions() const { return dims_; }

  std::vector<double> point(std::uint64_t index) const;

  /// Points 1..n.
  std::vector<std::vector<double>> first(std::size_t n) const;

 private:
  std::size_t dims_;
  std::vector<std::array<std::uint32_t, kBits>> directions_;
  std::vector<std::uint32_t> shift_;
};

}  // namespace mobo
