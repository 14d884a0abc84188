#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <opcouple/errors.hpp>
#include <opcouple/matrix.hpp>

namespace opcouple {

// Reduced row echelon form with the pivot column positions.
//
// Pivoting is deterministic: columns are scanned left to right and the
// first row with a nonzero entry at or below the working row becomes the
// pivot. No magnitude heuristics, so bases derived from the RREF are
// reproducible across runs and platforms.
struct Rref {
  RatMatrix mat;
  std::vector<std::size_t> pivots;
};

inline Rref rref(RatMatrix a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t pivot_row = row;
    while (pivot_row < m && a(pivot_row, col).is_zero()) ++pivot_row;
    if (pivot_row == m) continue;
    if (pivot_row != row)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(row, j), a(pivot_row, j));
    const Rational inv = a(row, col).reciprocal();
    for (std::size_t j = col; j < n; ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      const Rational factor = a(i, col);
      for (std::size_t j = col; j < n; ++j) {
        if (a(row, j).is_zero()) continue;
        a(i, j) -= factor * a(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return Rref{std::move(a), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& a) { return rref(a).pivots.size(); }

// (rank, nullity); rank + nullity = cols.
inline std::pair<std::size_t, std::size_t> rank_nullity(const RatMatrix& a) {
  const std::size_t r = rank(a);
  return {r, a.cols() - r};
}

inline std::size_t nullity(const RatMatrix& a) { return rank_nullity(a).second; }
inline std::size_t corank(const RatMatrix& a) { return a.rows() - rank(a); }

inline bool is_invertible(const RatMatrix& a) {
  return a.is_square() && rank(a) == a.rows();
}

// Kernel basis from the RREF, one vector per free column in ascending
// column order: the free coordinate is 1 and pivot coordinates carry the
// negated RREF entries.
inline Basis kernel_basis(const RatMatrix& a) {
  const Rref r = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;

  RatMatrix vectors(n, n - r.pivots.size());
  std::size_t out = 0;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    vectors(free_col, out) = Rational(1);
    for (std::size_t i = 0; i < r.pivots.size(); ++i)
      vectors(r.pivots[i], out) = -r.mat(i, free_col);
    ++out;
  }
  return Basis(n, std::move(vectors));
}

// Basis of the column space: the columns of a at its pivot positions.
inline Basis column_space_basis(const RatMatrix& a) {
  const Rref r = rref(a);
  RatMatrix vectors(a.rows(), r.pivots.size());
  for (std::size_t j = 0; j < r.pivots.size(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) vectors(i, j) = a(i, r.pivots[j]);
  return Basis(a.rows(), std::move(vectors));
}

// Greedy complement of span(s) drawn from the columns of pool, scanned in
// index order; a pool column is kept iff it increases the rank. Throws
// RankDeficient if s is not independent, and returns fewer than the full
// complement if the pool does not span the missing directions.
inline Basis complement_from(const Basis& s, const RatMatrix& pool) {
  if (pool.rows() != s.ambient_dim)
    throw DimensionMismatch("complement pool lives in a different space");
  const std::size_t base_rank = rank(s.vectors);
  if (base_rank != s.dim()) throw RankDeficient("complement of a dependent family");

  const Rref combined = rref(hcat(s.vectors, pool));
  RatMatrix chosen(s.ambient_dim, 0);
  for (std::size_t p : combined.pivots) {
    if (p < s.dim()) continue;
    chosen = hcat(chosen, pool.column(p - s.dim()));
  }
  return Basis(s.ambient_dim, std::move(chosen));
}

// Greedy complement against the standard basis; [s | complement] is then a
// square invertible matrix.
inline Basis complement(const Basis& s) {
  Basis c = complement_from(s, RatMatrix::identity(s.ambient_dim));
  if (s.dim() + c.dim() != s.ambient_dim)
    throw RankDeficient("complement construction failed");  // unreachable
  return c;
}

inline RatMatrix inverse(const RatMatrix& a) {
  if (!a.is_square()) throw NotSquare("inverse of " + a.shape_str() + " matrix");
  const std::size_t n = a.rows();
  const Rref r = rref(hcat(a, RatMatrix::identity(n)));
  if (r.pivots.size() < n || (n > 0 && r.pivots[n - 1] >= n))
    throw SingularMatrix("inverse of singular matrix");
  return r.mat.slice(0, n, n, 2 * n);
}

// Any particular solution x of a x = b with free variables set to zero, or
// nullopt when the system is inconsistent.
inline std::optional<RatMatrix> solve(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows())
    throw DimensionMismatch("solve: " + a.shape_str() + " vs rhs " + b.shape_str());
  const Rref r = rref(hcat(a, b));
  for (std::size_t p : r.pivots)
    if (p >= a.cols()) return std::nullopt;
  RatMatrix x(a.cols(), b.cols());
  for (std::size_t i = 0; i < r.pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(r.pivots[i], j) = r.mat(i, a.cols() + j);
  return x;
}

// Left inverse of a full-column-rank matrix that additionally kills the
// greedy complement of its column span: left_inverse(s) * s = I and
// left_inverse(s) * c = 0 for the complement columns c.
inline RatMatrix left_inverse(const Basis& s) {
  const Basis c = complement(s);
  const RatMatrix full_inv = inverse(hcat(s.vectors, c.vectors));
  return full_inv.slice(0, s.dim(), 0, s.ambient_dim);
}

}  // namespace opcouple
