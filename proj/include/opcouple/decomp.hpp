#pragma once

#include <utility>

#include <opcouple/linalg.hpp>
#include <opcouple/matrix.hpp>

namespace opcouple {

// Splitting of an operator u into an invertible core between a kernel
// complement and the range:
//
//        [ core  0 ]   [ x1 ]      [ x1p ]
//    u = [  0    0 ] : [ x2 ]  ->  [ x2p ]
//
// concretely inverse(s) * u * r = diag(core, 0) with r = [x1 | x2] and
// s = [x1p | x2p] invertible. x2 spans Ker u, x1p spans Ran u, and x2p is
// a chosen complement of the range (the cokernel). Every finite-dimensional
// operator splits this way.
struct RelRegDecomposition {
  Basis x1;        // complement of the kernel in the domain
  Basis x2;        // kernel
  Basis x1p;       // range
  Basis x2p;       // cokernel complement
  RatMatrix core;  // invertible compression of u
  RatMatrix r;     // [x1 | x2], square invertible
  RatMatrix s;     // [x1p | x2p], square invertible
};

// Deterministic policy: the range basis is the pivot columns of u, the
// kernel complement and the cokernel complement come from the greedy
// standard-basis complement.
inline RelRegDecomposition decompose(const RatMatrix& u) {
  RelRegDecomposition d;
  d.x2 = kernel_basis(u);
  d.x1 = complement(d.x2);
  d.x1p = column_space_basis(u);
  d.x2p = complement(d.x1p);
  // complement() appends after its argument, so reorder to [x1 | x2].
  d.r = hcat(d.x1.vectors, d.x2.vectors);
  d.s = hcat(d.x1p.vectors, d.x2p.vectors);
  const RatMatrix conjugated = inverse(d.s) * u * d.r;
  d.core = conjugated.slice(0, d.x1p.dim(), 0, d.x1.dim());
  return d;
}

// Exact check of every decomposition invariant.
inline bool verify_decomposition(const RatMatrix& u, const RelRegDecomposition& d) {
  const std::size_t m = u.rows(), n = u.cols();
  if (d.x1.ambient_dim != n || d.x2.ambient_dim != n || d.x1p.ambient_dim != m ||
      d.x2p.ambient_dim != m || d.r.rows() != n || d.r.cols() != n || d.s.rows() != m ||
      d.s.cols() != m)
    throw DimensionMismatch("decomposition does not match the operator's shape");

  if (d.r != hcat(d.x1.vectors, d.x2.vectors)) return false;
  if (d.s != hcat(d.x1p.vectors, d.x2p.vectors)) return false;
  if (!is_invertible(d.r) || !is_invertible(d.s)) return false;
  if (d.core.rows() != d.x1p.dim() || d.core.cols() != d.x1.dim()) return false;
  if (!is_invertible(d.core)) return false;

  if (inverse(d.s) * u * d.r !=
      block_diag(d.core, RatMatrix(m - d.core.rows(), n - d.core.cols())))
    return false;

  // x2 must span the kernel exactly and x1p the column space.
  if (!(u * d.x2.vectors).is_zero()) return false;
  const auto [rk, nul] = rank_nullity(u);
  if (d.x2.dim() != nul || d.x1p.dim() != rk) return false;
  if (rank(hcat(d.x1p.vectors, u)) != rk) return false;
  return true;
}

}  // namespace opcouple
