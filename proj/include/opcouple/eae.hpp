#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include <opcouple/decomp.hpp>
#include <opcouple/linalg.hpp>
#include <opcouple/matrix.hpp>
#include <opcouple/rng.hpp>

namespace opcouple {

// Equivalence after extension of u and v means
//
//    diag(u, I) = e * diag(v, I) * f
//
// with e, f invertible, where the extension block on the left runs over the
// domain of v and the one in the middle over the domain of u. Witnesses are
// built in a special block form in which, relative to the decompositions of
// u and v, everything is pinned down by a handful of free parameter blocks.

// Invertible identifications of the kernels and of the cokernel complements
// of the two operators, written in the decomposition bases.
struct KernelCokernelIso {
  RatMatrix e_prime;  // Ker u -> Ker v coordinates
  RatMatrix f_prime;  // Coker u -> Coker v coordinates
};

// The freely choosable blocks of a special-form witness.
struct WitnessParams {
  RatMatrix y1;  // x1 -> y1 block
  RatMatrix y2;  // x1 -> y2 block
  RatMatrix y3;  // y1 -> x1 block
  RatMatrix x2;  // y2p -> x1p block
  RatMatrix x3;  // y2p -> y1 block
  RatMatrix x4;  // y2p -> y2 block
  RatMatrix x6;  // y1p -> y2 block
};

// Blocks forced by the free parameters and the cores.
struct DerivedBlocks {
  RatMatrix x1;  // -u_core * y3 * v_core^-1
  RatMatrix x5;  // (I + y1 y3) * v_core^-1
  RatMatrix y4;  // e_prime^-1 * (x6 v_core - y2 y3)
};

struct EaeWitness {
  RatMatrix e;
  RatMatrix f;
  RatMatrix f_inv_claimed;  // closed-form inverse of f
  DerivedBlocks derived;
  WitnessParams params;
  KernelCokernelIso iso;
};

// Block sizes of the fine 4x4 witness scheme: rank / nullity / corank of
// each operator.
struct EaeSizes {
  std::size_t ru, pu, qu;
  std::size_t rv, pv, qv;
};

inline EaeSizes eae_sizes(const RelRegDecomposition& du, const RelRegDecomposition& dv) {
  return {du.x1.dim(), du.x2.dim(), du.x2p.dim(), dv.x1.dim(), dv.x2.dim(), dv.x2p.dim()};
}

// Coarse 2x2 split of witness matrices in original coordinates.
struct ExtensionSplit {
  std::size_t dom_u, cod_u, dom_v, cod_v;
};

inline ExtensionSplit extension_split(const RatMatrix& u, const RatMatrix& v) {
  return {u.cols(), u.rows(), v.cols(), v.rows()};
}

// Present iff the kernel and cokernel dimensions agree; the canonical
// isomorphisms are identities in the deterministic decomposition bases.
inline std::optional<KernelCokernelIso> eae_test(const RatMatrix& u, const RatMatrix& v) {
  const auto [rank_u, nullity_u] = rank_nullity(u);
  const auto [rank_v, nullity_v] = rank_nullity(v);
  const std::size_t corank_u = u.rows() - rank_u;
  const std::size_t corank_v = v.rows() - rank_v;
  if (nullity_u != nullity_v || corank_u != corank_v) return std::nullopt;
  return KernelCokernelIso{RatMatrix::identity(nullity_u), RatMatrix::identity(corank_u)};
}

inline WitnessParams zero_params(const EaeSizes& sz) {
  return {RatMatrix(sz.rv, sz.ru), RatMatrix(sz.pv, sz.ru), RatMatrix(sz.ru, sz.rv),
          RatMatrix(sz.ru, sz.qv), RatMatrix(sz.rv, sz.qv), RatMatrix(sz.pv, sz.qv),
          RatMatrix(sz.pv, sz.rv)};
}

inline WitnessParams zero_params(const RatMatrix& u, const RatMatrix& v) {
  return zero_params(eae_sizes(decompose(u), decompose(v)));
}

inline WitnessParams random_params(Rng& rng, const EaeSizes& sz,
                                   long bound = kDefaultEntryBound) {
  return {random_matrix(rng, sz.rv, sz.ru, bound), random_matrix(rng, sz.pv, sz.ru, bound),
          random_matrix(rng, sz.ru, sz.rv, bound), random_matrix(rng, sz.ru, sz.qv, bound),
          random_matrix(rng, sz.rv, sz.qv, bound), random_matrix(rng, sz.pv, sz.qv, bound),
          random_matrix(rng, sz.pv, sz.rv, bound)};
}

namespace detail {

inline void check_param_shapes(const EaeSizes& sz, const KernelCokernelIso& iso,
                               const WitnessParams& p) {
  auto expect = [](const RatMatrix& m, std::size_t rows, std::size_t cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols)
      throw DimensionMismatch(std::string("witness parameter ") + name + " has shape " +
                              m.shape_str());
  };
  expect(p.y1, sz.rv, sz.ru, "y1");
  expect(p.y2, sz.pv, sz.ru, "y2");
  expect(p.y3, sz.ru, sz.rv, "y3");
  expect(p.x2, sz.ru, sz.qv, "x2");
  expect(p.x3, sz.rv, sz.qv, "x3");
  expect(p.x4, sz.pv, sz.qv, "x4");
  expect(p.x6, sz.pv, sz.rv, "x6");
  expect(iso.e_prime, sz.pv, sz.pu, "e_prime");
  expect(iso.f_prime, sz.qv, sz.qu, "f_prime");
}

// Fine 4x4 assembly in decomposed coordinates. Rows of e run over
// (x1p, x2p, y1, y2), columns over (y1p, y2p, x1, x2); rows of f over
// (y1, y2, x1, x2), columns over (x1, x2, y1, y2).
inline RatMatrix assemble_e_dec(const EaeSizes& sz, const RatMatrix& u_core,
                                const KernelCokernelIso& iso, const WitnessParams& p,
                                const DerivedBlocks& d) {
  const RatMatrix f_prime_inv = inverse(iso.f_prime);
  return block({
      {d.x1, p.x2, u_core, RatMatrix(sz.ru, sz.pu)},
      {RatMatrix(sz.qu, sz.rv), f_prime_inv, RatMatrix(sz.qu, sz.ru), RatMatrix(sz.qu, sz.pu)},
      {d.x5, p.x3, -p.y1, RatMatrix(sz.rv, sz.pu)},
      {p.x6, p.x4, -p.y2, -iso.e_prime},
  });
}

inline RatMatrix assemble_f_dec(const EaeSizes& sz, const KernelCokernelIso& iso,
                                const WitnessParams& p, const RatMatrix& y4) {
  const RatMatrix e_prime_inv = inverse(iso.e_prime);
  return block({
      {p.y1, RatMatrix(sz.rv, sz.pu), RatMatrix::identity(sz.rv), RatMatrix(sz.rv, sz.pv)},
      {p.y2, iso.e_prime, RatMatrix(sz.pv, sz.rv), RatMatrix::identity(sz.pv)},
      {RatMatrix::identity(sz.ru) + p.y3 * p.y1, RatMatrix(sz.ru, sz.pu), p.y3,
       RatMatrix(sz.ru, sz.pv)},
      {y4 * p.y1 - e_prime_inv * p.y2, RatMatrix(sz.pu, sz.pu), y4, -e_prime_inv},
  });
}

inline RatMatrix assemble_f_inv_dec(const EaeSizes& sz, const KernelCokernelIso& iso,
                                    const WitnessParams& p, const RatMatrix& y4) {
  const RatMatrix e_prime_inv = inverse(iso.e_prime);
  return block({
      {-p.y3, RatMatrix(sz.ru, sz.pv), RatMatrix::identity(sz.ru), RatMatrix(sz.ru, sz.pu)},
      {-y4, e_prime_inv, RatMatrix(sz.pu, sz.ru), RatMatrix::identity(sz.pu)},
      {RatMatrix::identity(sz.rv) + p.y1 * p.y3, RatMatrix(sz.rv, sz.pv), -p.y1,
       RatMatrix(sz.rv, sz.pu)},
      {p.y2 * p.y3 + iso.e_prime * y4, RatMatrix(sz.pv, sz.pv), -p.y2, -iso.e_prime},
  });
}

// Change of basis between decomposed and original coordinates. e maps
// (cod v x dom u) to (cod u x dom v); f maps (dom u x dom v) to
// (dom v x dom u).
inline RatMatrix e_to_original(const RelRegDecomposition& du, const RelRegDecomposition& dv,
                               const RatMatrix& e_dec) {
  return block_diag(du.s, dv.r) * e_dec * inverse(block_diag(dv.s, du.r));
}

inline RatMatrix f_to_original(const RelRegDecomposition& du, const RelRegDecomposition& dv,
                               const RatMatrix& f_dec) {
  return block_diag(dv.r, du.r) * f_dec * inverse(block_diag(du.r, dv.r));
}

inline RatMatrix f_inv_to_original(const RelRegDecomposition& du, const RelRegDecomposition& dv,
                                   const RatMatrix& f_inv_dec) {
  return block_diag(du.r, dv.r) * f_inv_dec * inverse(block_diag(dv.r, du.r));
}

inline RatMatrix e_from_original(const RelRegDecomposition& du, const RelRegDecomposition& dv,
                                 const RatMatrix& e) {
  return inverse(block_diag(du.s, dv.r)) * e * block_diag(dv.s, du.r);
}

inline RatMatrix f_from_original(const RelRegDecomposition& du, const RelRegDecomposition& dv,
                                 const RatMatrix& f) {
  return inverse(block_diag(dv.r, du.r)) * f * block_diag(du.r, dv.r);
}

}  // namespace detail

inline DerivedBlocks derived_blocks(const RatMatrix& u_core, const RatMatrix& v_core,
                                    const KernelCokernelIso& iso, const WitnessParams& p) {
  const RatMatrix v_core_inv = inverse(v_core);
  DerivedBlocks d;
  d.x1 = -(u_core * p.y3 * v_core_inv);
  d.x5 = (RatMatrix::identity(p.y1.rows()) + p.y1 * p.y3) * v_core_inv;
  d.y4 = inverse(iso.e_prime) * (p.x6 * v_core - p.y2 * p.y3);
  return d;
}

// Builds the full special-form witness for an equivalent pair; the free
// parameters may be anything of the right shapes.
inline EaeWitness build_eae_witness(const RatMatrix& u, const RatMatrix& v,
                                    const KernelCokernelIso& iso, const WitnessParams& params) {
  if (!eae_test(u, v))
    throw NotEae("kernel or cokernel dimensions differ: " + u.shape_str() + " vs " +
                 v.shape_str());
  const RelRegDecomposition du = decompose(u);
  const RelRegDecomposition dv = decompose(v);
  const EaeSizes sz = eae_sizes(du, dv);
  detail::check_param_shapes(sz, iso, params);
  if (!is_invertible(iso.e_prime) || !is_invertible(iso.f_prime))
    throw NotEae("kernel/cokernel identifications must be invertible");

  EaeWitness w;
  w.iso = iso;
  w.params = params;
  w.derived = derived_blocks(du.core, dv.core, iso, params);
  w.e = detail::e_to_original(du, dv, detail::assemble_e_dec(sz, du.core, iso, params, w.derived));
  w.f = detail::f_to_original(du, dv, detail::assemble_f_dec(sz, iso, params, w.derived.y4));
  w.f_inv_claimed =
      detail::f_inv_to_original(du, dv, detail::assemble_f_inv_dec(sz, iso, params, w.derived.y4));
  return w;
}

// Exact check of the extension equivalence identity for given e and f.
inline bool verify_eae(const RatMatrix& u, const RatMatrix& v, const RatMatrix& e,
                       const RatMatrix& f) {
  const ExtensionSplit sp = extension_split(u, v);
  if (f.rows() != sp.dom_v + sp.dom_u || f.cols() != sp.dom_u + sp.dom_v ||
      e.rows() != sp.cod_u + sp.dom_v || e.cols() != sp.cod_v + sp.dom_u)
    throw DimensionMismatch("witness shapes do not match the operators");
  if (!is_invertible(e) || !is_invertible(f)) return false;
  const RatMatrix lhs = block_diag(u, RatMatrix::identity(sp.dom_v));
  const RatMatrix mid = block_diag(v, RatMatrix::identity(sp.dom_u));
  return lhs == e * mid * f;
}

// Checks that e and f are in the coarse special form
//
//    f = [ f11        I  ]     e = [ e11   u    ]
//        [ I+f22 f11  f22]         [ e21  -f11  ]
//
// with the closed-form inverse of f matching as well.
inline bool check_special_form(const RatMatrix& e, const RatMatrix& f, const RatMatrix& u,
                               const RatMatrix& v) {
  const ExtensionSplit sp = extension_split(u, v);
  if (f.rows() != sp.dom_v + sp.dom_u || f.cols() != sp.dom_u + sp.dom_v ||
      e.rows() != sp.cod_u + sp.dom_v || e.cols() != sp.cod_v + sp.dom_u)
    throw DimensionMismatch("witness shapes do not match the operators");

  const RatMatrix f11 = f.slice(0, sp.dom_v, 0, sp.dom_u);
  const RatMatrix f12 = f.slice(0, sp.dom_v, sp.dom_u, f.cols());
  const RatMatrix f21 = f.slice(sp.dom_v, f.rows(), 0, sp.dom_u);
  const RatMatrix f22 = f.slice(sp.dom_v, f.rows(), sp.dom_u, f.cols());
  if (!f12.is_identity()) return false;
  if (f21 != RatMatrix::identity(sp.dom_u) + f22 * f11) return false;

  const RatMatrix e12 = e.slice(0, sp.cod_u, sp.cod_v, e.cols());
  const RatMatrix e22 = e.slice(sp.cod_u, e.rows(), sp.cod_v, e.cols());
  if (e12 != u) return false;
  if (e22 != -f11) return false;

  if (!is_invertible(f)) return false;
  const RatMatrix f_inv = inverse(f);
  const RatMatrix expected_inv =
      block({{-f22, RatMatrix::identity(sp.dom_u)},
             {RatMatrix::identity(sp.dom_v) + f11 * f22, -f11}});
  return f_inv == expected_inv;
}

// [ x1  u_core ]
// [ x5   -y1   ]   -- the block whose invertibility decides that of e.
inline RatMatrix eblock(const RatMatrix& u_core, const RatMatrix& v_core, const RatMatrix& x1,
                        const RatMatrix& x5, const RatMatrix& y1, const RatMatrix& y3) {
  if (x1.rows() != u_core.rows() || x5.rows() != y1.rows() || x1.cols() != x5.cols() ||
      u_core.cols() != y1.cols() || x1.cols() != v_core.rows() || y3.rows() != u_core.cols() ||
      y3.cols() != y1.rows())
    throw DimensionMismatch("inconsistent coupling block shapes");
  return block({{x1, u_core}, {x5, -y1}});
}

struct EblockFactorization {
  RatMatrix x1;
  RatMatrix x5;
  RatMatrix middle;  // [ -y3, I; I + y1 y3, -y1 ], invertible for every y1, y3
};

// Factors the coupling block as diag(u_core, I) * middle * diag(v_core^-1, I).
// The middle factor is invertible for all parameter choices, which is what
// makes every parameter choice yield an invertible witness.
inline EblockFactorization eblock_factorization(const RatMatrix& u_core, const RatMatrix& v_core,
                                                const RatMatrix& y1, const RatMatrix& y3) {
  if (!u_core.is_square() || !v_core.is_square())
    throw SingularCore("cores must be square");
  if (!is_invertible(u_core) || !is_invertible(v_core))
    throw SingularCore("cores must be invertible");
  if (y1.rows() != v_core.rows() || y1.cols() != u_core.cols() || y3.rows() != u_core.rows() ||
      y3.cols() != y1.rows())
    throw DimensionMismatch("parameter shapes do not match the cores");
  const std::size_t ru = u_core.rows(), rv = v_core.rows();
  EblockFactorization out;
  out.middle = block({{-y3, RatMatrix::identity(ru)},
                      {RatMatrix::identity(rv) + y1 * y3, -y1}});
  const RatMatrix v_inv = inverse(v_core);
  out.x1 = -(u_core * y3 * v_inv);
  out.x5 = (RatMatrix::identity(rv) + y1 * y3) * v_inv;
  return out;
}

// Checks the two coupling identities of the fine block scheme against
// explicitly supplied decompositions. The cores are never inverted here, so
// hand-built decompositions with singular cores are acceptable: the check
// covers the general complementable case, not just invertible cores.
inline bool verify_eae_condition(const RelRegDecomposition& du, const RelRegDecomposition& dv,
                                 const RatMatrix& e, const RatMatrix& f) {
  const EaeSizes sz = eae_sizes(du, dv);
  const std::size_t e_rows = sz.ru + sz.qu + sz.rv + sz.pv;
  const std::size_t e_cols = sz.rv + sz.qv + sz.ru + sz.pu;
  const std::size_t f_rows = sz.rv + sz.pv + sz.ru + sz.pu;
  const std::size_t f_cols = sz.ru + sz.pu + sz.rv + sz.pv;
  if (e.rows() != e_rows || e.cols() != e_cols || f.rows() != f_rows || f.cols() != f_cols)
    throw NotInForm("witness shapes do not match the decompositions");

  const RatMatrix ed = detail::e_from_original(du, dv, e);
  const RatMatrix fd = detail::f_from_original(du, dv, f);

  const std::size_t er[5] = {0, sz.ru, sz.ru + sz.qu, sz.ru + sz.qu + sz.rv, e_rows};
  const std::size_t ec[5] = {0, sz.rv, sz.rv + sz.qv, sz.rv + sz.qv + sz.ru, e_cols};
  const std::size_t fr[5] = {0, sz.rv, sz.rv + sz.pv, sz.rv + sz.pv + sz.ru, f_rows};
  const std::size_t fc[5] = {0, sz.ru, sz.ru + sz.pu, sz.ru + sz.pu + sz.rv, f_cols};
  auto eb = [&](int i, int j) { return ed.slice(er[i - 1], er[i], ec[j - 1], ec[j]); };
  auto fb = [&](int i, int j) { return fd.slice(fr[i - 1], fr[i], fc[j - 1], fc[j]); };

  const RatMatrix y1 = fb(1, 1), y2 = fb(2, 1), e_prime = fb(2, 2);
  const RatMatrix y3 = fb(3, 3), y4 = fb(4, 3), neg_e_prime_inv = fb(4, 4);
  auto in_form = [](bool ok, const char* what) {
    if (!ok) throw NotInForm(std::string("witness block scheme violated: ") + what);
  };
  in_form(fb(1, 2).is_zero() && fb(1, 4).is_zero() && fb(2, 3).is_zero() && fb(3, 2).is_zero() &&
              fb(3, 4).is_zero() && fb(4, 2).is_zero(),
          "f zero blocks");
  in_form(fb(1, 3).is_identity() && fb(2, 4).is_identity(), "f identity blocks");
  in_form((e_prime * -neg_e_prime_inv).is_identity() &&
              (-neg_e_prime_inv * e_prime).is_identity(),
          "kernel identification not invertible");
  in_form(fb(3, 1) == RatMatrix::identity(sz.ru) + y3 * y1, "f coupled block (3,1)");
  in_form(fb(4, 1) == y4 * y1 + neg_e_prime_inv * y2, "f coupled block (4,1)");

  const RatMatrix x1 = eb(1, 1), x5 = eb(3, 1), x6 = eb(4, 1), f_prime_inv = eb(2, 2);
  const RatMatrix u_core_slot = eb(1, 3);
  in_form(eb(1, 4).is_zero() && eb(2, 1).is_zero() && eb(2, 3).is_zero() && eb(2, 4).is_zero() &&
              eb(3, 4).is_zero(),
          "e zero blocks");
  in_form(is_invertible(f_prime_inv), "cokernel identification not invertible");
  in_form(eb(3, 3) == -y1 && eb(4, 3) == -y2 && eb(4, 4) == -e_prime, "e/f cross blocks");
  in_form(u_core_slot == du.core, "core slot of e");

  // First identity: the coupling block intertwines the two cores through
  // the universal middle factor.
  const RatMatrix coupling = block({{x1, du.core}, {x5, -y1}});
  const RatMatrix middle = block({{-y3, RatMatrix::identity(sz.ru)},
                                  {RatMatrix::identity(sz.rv) + y1 * y3, -y1}});
  const bool first = coupling * block_diag(dv.core, RatMatrix::identity(sz.ru)) ==
                     block_diag(du.core, RatMatrix::identity(sz.rv)) * middle;
  // Second identity, stated multiplicatively so singular blocks never need
  // inverting: e_prime * y4 = x6 * v_core - y2 * y3.
  const bool second = e_prime * y4 == x6 * dv.core - y2 * y3;
  return first && second;
}

inline bool verify_eae_condition(const RatMatrix& u, const RatMatrix& v, const RatMatrix& e,
                                 const RatMatrix& f) {
  return verify_eae_condition(decompose(u), decompose(v), e, f);
}

}  // namespace opcouple
