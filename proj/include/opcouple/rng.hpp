#pragma once

#include <cstdint>
#include <random>

#include <opcouple/linalg.hpp>
#include <opcouple/matrix.hpp>

namespace opcouple {

// Deterministic random source. mt19937_64 output is pinned by the
// standard and the modulo mapping below avoids std::uniform_int_distribution,
// whose output is implementation-defined; streams are therefore identical
// across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Inclusive bounds.
  long int_in(long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

  std::size_t size_in(std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(int_in(static_cast<long>(lo), static_cast<long>(hi)));
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr long kDefaultEntryBound = 3;

// Integer-entried matrix with entries in [-bound, bound].
inline RatMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                               long bound = kDefaultEntryBound) {
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(rng.int_in(-bound, bound));
  return m;
}

// Product of a unit lower and a unit upper triangular integer matrix with
// off-diagonal entries in [-bound, bound]; determinant 1 by construction,
// so exactly invertible with bounded entry growth.
inline RatMatrix random_invertible(Rng& rng, std::size_t n, long bound = kDefaultEntryBound) {
  RatMatrix lower = RatMatrix::identity(n);
  RatMatrix upper = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) lower(i, j) = Rational(rng.int_in(-bound, bound));
    for (std::size_t j = i + 1; j < n; ++j) upper(i, j) = Rational(rng.int_in(-bound, bound));
  }
  return lower * upper;
}

// P * diag(I_rank, 0) * Q with P, Q random invertible integer matrices;
// the rank is exact for every seed.
inline RatMatrix random_rank_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                    std::size_t target_rank, long bound = kDefaultEntryBound) {
  if (target_rank > rows || target_rank > cols)
    throw DimensionMismatch("rank exceeds matrix dimensions");
  const RatMatrix p = random_invertible(rng, rows, bound);
  const RatMatrix q = random_invertible(rng, cols, bound);
  RatMatrix d(rows, cols);
  for (std::size_t i = 0; i < target_rank; ++i) d(i, i) = Rational(1);
  return p * d * q;
}

inline RatMatrix random_rank_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols,
                                    std::size_t target_rank, long bound = kDefaultEntryBound) {
  Rng rng(seed);
  return random_rank_matrix(rng, rows, cols, target_rank, bound);
}

}  // namespace opcouple
