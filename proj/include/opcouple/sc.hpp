#pragma once

#include <utility>

#include <opcouple/decomp.hpp>
#include <opcouple/eae.hpp>
#include <opcouple/linalg.hpp>
#include <opcouple/matrix.hpp>

namespace opcouple {

// u and v are Schur coupled when they are the two Schur complements of a
// single block operator m = [a b; c d] with a and d invertible:
// u = a - b d^-1 c and v = d - c a^-1 b.
struct ScWitness {
  RatMatrix a;
  RatMatrix b;
  RatMatrix c;
  RatMatrix d;
};

namespace detail {

inline void check_sc_shapes(const ScWitness& m) {
  if (!m.a.is_square() || !m.d.is_square())
    throw DimensionMismatch("diagonal coupling blocks must be square");
  if (m.b.rows() != m.a.rows() || m.b.cols() != m.d.cols() || m.c.rows() != m.d.rows() ||
      m.c.cols() != m.a.cols())
    throw DimensionMismatch("coupling blocks do not assemble");
}

}  // namespace detail

inline std::pair<RatMatrix, RatMatrix> schur_complements(const ScWitness& m) {
  detail::check_sc_shapes(m);
  if (!is_invertible(m.a) || !is_invertible(m.d))
    throw SingularBlock("coupling requires invertible diagonal blocks");
  return {m.a - m.b * inverse(m.d) * m.c, m.d - m.c * inverse(m.a) * m.b};
}

inline bool verify_sc(const RatMatrix& u, const RatMatrix& v, const ScWitness& m) {
  detail::check_sc_shapes(m);
  if (u.rows() != m.a.rows() || u.cols() != m.a.cols() || v.rows() != m.d.rows() ||
      v.cols() != m.d.cols())
    throw DimensionMismatch("operators do not match the coupling blocks");
  const auto [su, sv] = schur_complements(m);
  return su == u && sv == v;
}

// Strong extension equivalence: the witness corners into and out of the
// extension spaces must be invertible, i.e. the upper-right block of f and
// the lower-left block of e. For special-form witnesses the f corner is the
// identity, so the e corner decides.
inline bool seae_test(const RatMatrix& e, const RatMatrix& f, const ExtensionSplit& sp) {
  if (f.rows() != sp.dom_v + sp.dom_u || f.cols() != sp.dom_u + sp.dom_v ||
      e.rows() != sp.cod_u + sp.dom_v || e.cols() != sp.cod_v + sp.dom_u)
    throw DimensionMismatch("witness shapes do not match the split");
  const RatMatrix f12 = f.slice(0, sp.dom_v, sp.dom_u, f.cols());
  const RatMatrix e21 = e.slice(sp.cod_u, e.rows(), 0, sp.cod_v);
  return is_invertible(f12) && is_invertible(e21);
}

// Builds a coupling witness for a square equivalent pair directly from the
// decompositions: in decomposed coordinates
//
//    a = diag(u_core, g)   b = embed(b0 : Ker v -> Coker u)
//    d = diag(v_core, h)   c = embed(c0 : Ker u -> Coker v)
//
// with b0, c0, h invertible and g = b0 h^-1 c0, so that the Schur
// complements collapse to diag(u_core, 0) and diag(v_core, 0) exactly.
// Defaults: b0 = c0 = h = identity in the canonical bases.
inline ScWitness sc_construct(const RatMatrix& u, const RatMatrix& v) {
  if (!u.is_square() || !v.is_square())
    throw NotSquare("coupling is defined for square operators");
  if (!eae_test(u, v))
    throw NotEae("kernel or cokernel dimensions differ: " + u.shape_str() + " vs " +
                 v.shape_str());

  const RelRegDecomposition du = decompose(u);
  const RelRegDecomposition dv = decompose(v);
  const EaeSizes sz = eae_sizes(du, dv);
  const std::size_t p = sz.pu;  // = pv = qu = qv for a square equivalent pair

  const RatMatrix b0 = RatMatrix::identity(p);
  const RatMatrix c0 = RatMatrix::identity(p);
  const RatMatrix h = RatMatrix::identity(p);
  const RatMatrix g = b0 * inverse(h) * c0;

  const RatMatrix a_dec = block_diag(du.core, g);
  const RatMatrix d_dec = block_diag(dv.core, h);
  const RatMatrix b_dec = block({{RatMatrix(sz.ru, sz.rv), RatMatrix(sz.ru, p)},
                                 {RatMatrix(p, sz.rv), b0}});
  const RatMatrix c_dec = block({{RatMatrix(sz.rv, sz.ru), RatMatrix(sz.rv, p)},
                                 {RatMatrix(p, sz.ru), c0}});

  ScWitness m;
  m.a = du.s * a_dec * inverse(du.r);
  m.b = du.s * b_dec * inverse(dv.r);
  m.c = dv.s * c_dec * inverse(du.r);
  m.d = dv.s * d_dec * inverse(dv.r);
  return m;
}

// Parameter choice turning the special-form witness into a strong one:
// all couplings zero except the kernel-to-cokernel block x4, which is the
// canonical identification. The e corner then becomes block diagonal with
// invertible diagonal, hence invertible.
inline std::pair<WitnessParams, KernelCokernelIso> seae_params(const RatMatrix& u,
                                                               const RatMatrix& v) {
  if (!u.is_square() || !v.is_square())
    throw NotSquare("strong witnesses are built for square operators");
  const auto iso = eae_test(u, v);
  if (!iso)
    throw NotEae("kernel or cokernel dimensions differ: " + u.shape_str() + " vs " +
                 v.shape_str());
  const EaeSizes sz = eae_sizes(decompose(u), decompose(v));
  WitnessParams params = zero_params(sz);
  params.x4 = RatMatrix::identity(sz.pv);
  return {params, *iso};
}

}  // namespace opcouple
