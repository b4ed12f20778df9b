#include "mobo/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mobo {

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return std::min(k, n - 1);
}

double RandomStream::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SeededStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

FixedStream::FixedStream(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("FixedStream needs at least one value");
}

double FixedStream::uniform() {
  const double v = values_[next_];
  next_ = (next_ + 1) % values_.size();
  return v;
}

std::uint64_t FixedStream::bits() {
  return static_cast<std::uint64_t>(uniform() * 0x1.0p64);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(splitmix64(parent) ^ (index * 0xd1342543de82ef95ULL + 1));
}

}  // namespace mobo
