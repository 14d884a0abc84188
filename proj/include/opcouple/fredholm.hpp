#pragma once

#include <cstddef>
#include <utility>

#include <opcouple/linalg.hpp>
#include <opcouple/matrix.hpp>

namespace opcouple {

// dim Ker - dim Coker. For an m x n matrix this is n - m whatever the
// entries; the interesting content is in the constructions below, which
// realize prescribed indices through rectangular maps.
struct IndexCert {
  long index = 0;
  std::size_t nullity = 0;
  std::size_t corank = 0;
};

inline IndexCert index(const RatMatrix& a) {
  const auto [rk, nul] = rank_nullity(a);
  IndexCert c;
  c.nullity = nul;
  c.corank = a.rows() - rk;
  c.index = static_cast<long>(c.nullity) - static_cast<long>(c.corank);
  return c;
}

// For surjective f, a map xi that sends Ker f isomorphically onto the
// k-dimensional target and kills the chosen kernel complement; the stack
// [f; xi] is then invertible.
inline RatMatrix complete_to_invertible(const RatMatrix& f) {
  const auto [rk, nul] = rank_nullity(f);
  if (rk != f.rows()) throw NotSurjective("completion requires a surjective map");
  if (nul == 0) return RatMatrix(0, f.cols());
  return left_inverse(kernel_basis(f));
}

// Top n-k rows of an invertible map; surjective with index k.
inline RatMatrix extract_fredholm_from_iso(const RatMatrix& t, std::size_t k) {
  if (!t.is_square() || !is_invertible(t))
    throw NotInvertible("extraction requires an invertible map");
  if (k > t.rows()) throw DimensionMismatch("index exceeds the dimension");
  return t.slice(0, t.rows() - k, 0, t.cols());
}

// Certificate for rewriting I - b1 b2 minus a finite-rank correction as a
// coupling through the same middle space.
struct NormalizationCert {
  RatMatrix r;       // the correction: I - b1_new b2_new = (I - b1 b2) - r
  RatMatrix tau;     // embedding of the correction range
  RatMatrix pi;      // left inverse of tau
  RatMatrix l_iso;   // repacking isomorphism on (middle space + correction range)
  RatMatrix b1_new;
  RatMatrix b2_new;
};

// Corrects x = I - b1 b2 by a minimal-rank r so that x - r is injective
// (invertible, being square), while keeping the coupling through the same
// middle space. The correction range is drawn from Ran b1, which always
// complements Ran x since x + b1 b2 = I; the repacking l_iso absorbs the
// extra embedding column back into b1, so b1 is unchanged and only b2 moves.
inline NormalizationCert normalize_injective(const RatMatrix& b1, const RatMatrix& b2) {
  if (b1.cols() != b2.rows() || b1.rows() != b2.cols())
    throw DimensionMismatch("coupling factors do not compose both ways");
  const std::size_t v = b1.rows(), w = b1.cols();
  const RatMatrix x = RatMatrix::identity(v) - b1 * b2;
  const std::size_t p = nullity(x);

  NormalizationCert cert;
  if (p == 0) {
    cert.r = RatMatrix(v, v);
    cert.tau = RatMatrix(v, 0);
    cert.pi = RatMatrix(0, v);
    cert.l_iso = RatMatrix::identity(w);
    cert.b1_new = b1;
    cert.b2_new = b2;
    return cert;
  }
  if (p > w) throw CorrectionTooLarge("correction rank exceeds the middle space");  // unreachable

  const Basis kb = kernel_basis(x);
  const Basis z = complement_from(column_space_basis(x), b1);
  if (z.dim() != p) throw CorrectionTooLarge("coupling range does not carry the correction");

  cert.tau = z.vectors;
  cert.pi = left_inverse(z);
  const RatMatrix k = cert.tau * left_inverse(kb);  // Ker x -> complement of Ran x
  cert.r = -k;

  const auto c_tau = solve(b1, cert.tau);  // tau = b1 * c_tau, consistent by construction
  if (!c_tau) throw CorrectionTooLarge("correction range escapes the coupling");
  cert.l_iso = block({{RatMatrix::identity(w), *c_tau},
                      {RatMatrix(p, w), RatMatrix::identity(p)}});
  cert.b1_new = b1;
  cert.b2_new = b2 + *c_tau * (cert.pi * cert.r);
  return cert;
}

// Couplings realizing I - b1 b2 = diag(t1, I) across a split middle space;
// the first split components must have equal dimension.
inline std::pair<RatMatrix, RatMatrix> k_from_split(std::size_t v1_dim, std::size_t v2_dim,
                                                    std::size_t w1_dim, std::size_t w2_dim,
                                                    const RatMatrix& t1) {
  if (v1_dim != w1_dim)
    throw DimensionMismatch("split pieces must be isomorphic");
  if (t1.rows() != v1_dim || t1.cols() != v1_dim)
    throw DimensionMismatch("t1 must be square of the split dimension");
  const RatMatrix s1 = RatMatrix::identity(v1_dim);
  const RatMatrix b1 = block({{inverse(s1), RatMatrix(v1_dim, w2_dim)},
                              {RatMatrix(v2_dim, w1_dim), RatMatrix(v2_dim, w2_dim)}});
  const RatMatrix b2 = block({{s1 * (RatMatrix::identity(v1_dim) - t1), RatMatrix(w1_dim, v2_dim)},
                              {RatMatrix(w2_dim, v1_dim), RatMatrix(w2_dim, v2_dim)}});
  return {b1, b2};
}

struct CornerExtract {
  Basis kernel;          // Ker of the corner block
  RatMatrix restricted;  // corner restricted to the kernel's complement; injective
};

// Extracts the corner t12 of an invertible t with respect to the given
// domain split (s1, t1) and codomain split (s2, t2), together with its
// kernel and its injective restriction.
inline CornerExtract corner_extract(const RatMatrix& t, std::size_t s1, std::size_t t1,
                                    std::size_t s2, std::size_t t2) {
  if (s1 + t1 != t.cols() || s2 + t2 != t.rows())
    throw DimensionMismatch("splits do not add up to the shape");
  if (!t.is_square() || !is_invertible(t))
    throw NotInvertible("corner extraction requires an invertible map");
  const RatMatrix t12 = t.slice(0, s2, s1, s1 + t1);
  CornerExtract out;
  out.kernel = kernel_basis(t12);
  out.restricted = t12 * complement(out.kernel).vectors;
  return out;
}

struct KernelBookkeeping {
  std::size_t nullity_t1 = 0;
  std::size_t nullity_t11 = 0;
  std::size_t corank_t1 = 0;
  std::size_t corank_t11 = 0;
  bool nullity_identity = false;  // nullity(t1) = nullity(t11) + f_dim
  bool corank_identity = false;   // corank(t1) = corank(t11) + f_dim
};

// Zeroes every block coupled to the trailing f_dim coordinates, keeping the
// leading corner t11, and accounts for the kernel and cokernel growth.
inline KernelBookkeeping kernel_bookkeeping(const RatMatrix& t, std::size_t f_dim) {
  if (!t.is_square()) throw NotSquare("bookkeeping is defined for square operators");
  if (f_dim > t.rows()) throw DimensionMismatch("split exceeds the dimension");
  const std::size_t z = t.rows() - f_dim;
  const RatMatrix t11 = t.slice(0, z, 0, z);
  const RatMatrix t1 = block_diag(t11, RatMatrix(f_dim, f_dim));

  KernelBookkeeping out;
  out.nullity_t1 = nullity(t1);
  out.nullity_t11 = nullity(t11);
  out.corank_t1 = corank(t1);
  out.corank_t11 = corank(t11);
  out.nullity_identity = out.nullity_t1 == out.nullity_t11 + f_dim;
  out.corank_identity = out.corank_t1 == out.corank_t11 + f_dim;
  return out;
}

}  // namespace opcouple
