#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mobo {

/// Source of uniform variates in [0, 1). Every draw in the library goes
/// through this interface so tests can force specific values.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  virtual double uniform() = 0;

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal variate (Box-Muller over two uniforms).
  double normal();

  /// 64 raw bits; used to derive child seeds and scramble masks.
  virtual std::uint64_t bits() = 0;
};

/// Mersenne-twister backed stream. Uniforms are built from the top 53 bits
/// so results are bit-identical across standard libraries.
class SeededStream final : public RandomStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() override;
  std::uint64_t bits() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Replays a fixed list of uniforms, cycling when exhausted. Test helper.
class FixedStream final : public RandomStream {
 public:
  explicit FixedStream(std::vector<double> values);

  double uniform() override;
  std::uint64_t bits() override;

 private:
  std::vector<double> values_;
  std::size_t next_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic child seed for stream `index` of a parent seed.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace mobo
