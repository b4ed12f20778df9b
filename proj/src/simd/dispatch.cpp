#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mobo/simd/kernels.hpp"

namespace mobo::simd {

namespace {

constexpr int kUnset = -1;
std::atomic<int> g_active{kUnset};

Isa resolve_from_environment() {
  if (const char* env = std::getenv("MOBO_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && avx2::available()) return Isa::avx2;
    if (want == "neon" && neon::available()) return Isa::neon;
  }
  return detect_isa();
}

Isa current() {
  int v = g_active.load(std::memory_order_acquire);
  if (v == kUnset) {
    v = static_cast<int>(resolve_from_environment());
    g_active.store(v, std::memory_order_release);
  }
  return static_cast<Isa>(v);
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd kernel: length mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

Isa detect_isa() {
  if (avx2::available()) return Isa::avx2;
  if (neon::available()) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() { return current(); }

bool force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) return false;
  if (isa == Isa::neon && !neon::available()) return false;
  g_active.store(static_cast<int>(isa), std::memory_order_release);
  return true;
}

void reset_isa() { g_active.store(kUnset, std::memory_order_release); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  switch (current()) {
    case Isa::avx2: return avx2::squared_distance(a.data(), b.data(), a.size());
    case Isa::neon: return neon::squared_distance(a.data(), b.data(), a.size());
    case Isa::scalar: break;
  }
  return scalar::squared_distance(a.data(), b.data(), a.size());
}

void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out) {
  check_sizes(query.size(), dim);
  check_sizes(rows.size(), dim * out.size());
  auto kernel = &scalar::squared_distance;
  switch (current()) {
    case Isa::avx2: kernel = &avx2::squared_distance; break;
    case Isa::neon: kernel = &neon::squared_distance; break;
    case Isa::scalar: break;
  }
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = kernel(query.data(), rows.data() + r * dim, dim);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  switch (current()) {
    case Isa::avx2: return avx2::dot(a.data(), b.data(), a.size());
    case Isa::neon: return neon::dot(a.data(), b.data(), a.size());
    case Isa::scalar: break;
  }
  return scalar::dot(a.data(), b.data(), a.size());
}

}  // namespace mobo::simd
