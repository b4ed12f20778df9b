#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the GP surrogate and the design-space
// distance. Each kernel has a scalar reference and vector variants; the
// dispatcher picks one at first use based on CPU features. Setting
// MOBO_SIMD=scalar in the environment forces the reference path.

namespace mobo::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Best ISA supported by this CPU and this build.
Isa detect_isa();

/// ISA in use by the dispatched entry points below.
Isa active_isa();

/// Overrides dispatch; returns false if `isa` is unavailable.
bool force_isa(Isa isa);

/// Restores CPU-feature dispatch (honouring MOBO_SIMD).
void reset_isa();

/// sum_i (a[i] - b[i])^2
double squared_distance(std::span<const double> a, std::span<const double> b);

/// out[r] = squared_distance(query, rows[r*dim : (r+1)*dim]) for each row.
void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

namespace scalar {
double squared_distance(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
double squared_distance(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace avx2

namespace neon {
bool available();
double squared_distance(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace neon

}  // namespace mobo::simd
