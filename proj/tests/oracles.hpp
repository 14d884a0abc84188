// Independent oracles for the test suite. Everything here deliberately
// avoids the library's elimination path: determinants by cofactor
// expansion, rank by minor enumeration, factorization existence by grid
// search. Keep the inputs small.
#pragma once

#include <cstdint>
#include <vector>

#include <opcouple/matrix.hpp>

namespace oracle {

using opcouple::RatMatrix;
using opcouple::Rational;

inline Rational det(const RatMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw opcouple::NotSquare("oracle det");
  if (n == 0) return Rational(1);
  if (n == 1) return m(0, 0);
  Rational acc(0);
  int sign = 1;
  for (std::size_t j = 0; j < n; ++j) {
    RatMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    acc += Rational(sign) * m(0, j) * det(minor);
    sign = -sign;
  }
  return acc;
}

inline bool invertible(const RatMatrix& m) {
  return m.is_square() && !det(m).is_zero();
}

namespace detail {

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Largest k with a nonzero k x k minor.
inline std::size_t rank(const RatMatrix& m) {
  const std::size_t max_k = std::min(m.rows(), m.cols());
  for (std::size_t k = max_k; k > 0; --k) {
    std::vector<std::vector<std::size_t>> row_sets, col_sets;
    std::vector<std::size_t> cur;
    detail::subsets(m.rows(), k, 0, cur, row_sets);
    detail::subsets(m.cols(), k, 0, cur, col_sets);
    for (const auto& rs : row_sets) {
      for (const auto& cs : col_sets) {
        RatMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor(i, j) = m(rs[i], cs[j]);
        if (!det(minor).is_zero()) return k;
      }
    }
  }
  return 0;
}

// Exhaustive search for an integer factorization k = b1 * b2 through a
// w-dimensional middle space, entries of b1 and b2 in [-bound, bound].
// Runs in plain int64, so k must have small integer entries.
inline bool grid_factorizable(const RatMatrix& k, std::size_t w, long bound) {
  const std::size_t v = k.rows();
  if (v != k.cols()) throw opcouple::NotSquare("oracle factorization");
  std::vector<long> target(v * v);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j) {
      if (!k(i, j).is_integer()) return false;
      target[i * v + j] = k(i, j).num().get_si();
    }
  if (v == 0 || w == 0) {
    for (long t : target)
      if (t != 0) return false;
    return true;
  }

  const std::size_t cells = v * w;
  const long base = 2 * bound + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= static_cast<std::uint64_t>(base);

  std::vector<long> b1(cells), b2(cells);
  auto decode = [&](std::uint64_t code, std::vector<long>& out) {
    for (std::size_t i = 0; i < cells; ++i) {
      out[i] = static_cast<long>(code % base) - bound;
      code /= base;
    }
  };
  for (std::uint64_t c1 = 0; c1 < total; ++c1) {
    decode(c1, b1);
    for (std::uint64_t c2 = 0; c2 < total; ++c2) {
      decode(c2, b2);
      bool ok = true;
      for (std::size_t i = 0; i < v && ok; ++i)
        for (std::size_t j = 0; j < v && ok; ++j) {
          long acc = 0;
          for (std::size_t t = 0; t < w; ++t) acc += b1[i * w + t] * b2[t * v + j];
          ok = acc == target[i * v + j];
        }
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace oracle
