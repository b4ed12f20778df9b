#include "mobo/sobol.hpp"

#include <stdexcept>
#include <string>

#include "mobo/random.hpp"

namespace mobo {

namespace {

struct DirectionNumbers {
  unsigned degree;       // s
  unsigned coefficients; // a
  std::array<std::uint32_t, 7> m;
};

// Dimensions 2..21 of new-joe-kuo-6.21201. Dimension 1 uses m_i = 1.
constexpr std::array<DirectionNumbers, SobolSequence::kMaxDimensions - 1> kTable{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

}  // namespace

SobolSequence::SobolSequence(std::size_t dims, std::optional<std::uint64_t> scramble_seed)
    : dims_(dims), directions_(dims), shift_(dims, 0U) {
  if (dims == 0 || dims > kMaxDimensions) {
    throw std::invalid_argument("Sobol dimension " + std::to_string(dims) + " outside supported range 1.." +
                                std::to_string(kMaxDimensions));
  }
  for (int i = 0; i < kBits; ++i) directions_[0][i] = 1U << (31 - i);

  for (std::size_t d = 1; d < dims; ++d) {
    const auto& entry = kTable[d - 1];
    const unsigned s = entry.degree;
    auto& v = directions_[d];
    for (unsigned i = 0; i < s; ++i) v[i] = entry.m[i] << (31 - i);
    for (unsigned i = s; i < static_cast<unsigned>(kBits); ++i) {
      v[i] = v[i - s] ^ (v[i - s] >> s);
      for (unsigned k = 1; k < s; ++k) {
        if ((entry.coefficients >> (s - 1 - k)) & 1U) v[i] ^= v[i - k];
      }
    }
  }

  if (scramble_seed) {
    SeededStream rng(*scramble_seed);
    for (auto& mask : shift_) mask = static_cast<std::uint32_t>(rng.bits() >> 32);
  }
}

std::vector<double> SobolSequence::point(std::uint64_t index) const {
  std::vector<double> x(dims_);
  for (std::size_t d = 0; d < dims_; ++d) {
    std::uint32_t acc = shift_[d];
    std::uint64_t k = index;
    for (int bit = 0; k != 0 && bit < kBits; ++bit, k >>= 1) {
      if (k & 1U) acc ^= directions_[d][bit];
    }
    x[d] = static_cast<double>(acc) * 0x1.0p-32;
  }
  return x;
}

std::vector<std::vector<double>> SobolSequence::first(std::size_t n) const {
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(point(k));
  return out;
}

}  // namespace mobo
