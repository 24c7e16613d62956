#pragma once

// Seeded random sources. Every stochastic routine takes an explicit seed so
// results are reproducible; sub-seeds for independent streams (trials,
// methods) are derived with splitmix64.

#include "edmkit/edm_core.hpp"

#include <cstdint>
#include <random>

namespace edm {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream id for (seed, stream, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix_seed(mix_seed(mix_seed(seed) ^ stream) ^ index);
}

/// Uniform double in [0, 1) from the top 53 bits; identical across
/// standard library implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal via Box-Muller on uniform01.
double standard_normal(Rng& rng);

/// rows x cols matrix with i.i.d. U[lo, hi) entries, filled column-major.
Matrix uniform_matrix(Rng& rng, Index rows, Index cols, double lo = 0.0, double hi = 1.0);

/// rows x cols matrix with i.i.d. N(0, 1) entries.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols);

/// Haar-ish random orthogonal matrix from the QR factorization of a
/// Gaussian matrix (sign-corrected), so det may be +1 or -1.
Matrix random_orthogonal(Rng& rng, Index dim);

/// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace edm
