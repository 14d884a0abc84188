#pragma once

#include <optional>
#include <utility>

#include <opcouple/linalg.hpp>
#include <opcouple/matrix.hpp>

namespace opcouple {

// The block operator problem: given spaces V, W, Z1, Z2 with
// V + Z1 ~ V + Z2 and W + Z1 ~ W + Z2, find b1 : W -> V, b2 : V -> W and
// arbitrary a12, a21, a22 so that
//
//    t = [ I - b1 b2   a12 ]  :  V + Z1  ->  V + Z2
//        [    a21      a22 ]
//
// is invertible. In finite dimensions the space constraint collapses to
// dim Z1 = dim Z2, and the problem is then always solvable.
struct BsopInstance {
  std::size_t dim_v = 0;
  std::size_t dim_w = 0;
  std::size_t dim_z1 = 0;
  std::size_t dim_z2 = 0;
};

struct BsopSolution {
  RatMatrix b1;
  RatMatrix b2;
  RatMatrix a12;
  RatMatrix a21;
  RatMatrix a22;
  RatMatrix t;
};

inline bool check_banprops(const BsopInstance& inst) { return inst.dim_z1 == inst.dim_z2; }

// The trivial solution: everything zero except an invertible a22.
inline BsopSolution solve_bsop(const BsopInstance& inst) {
  if (!check_banprops(inst))
    throw BanPropsViolated("extension spaces must have equal dimension");
  BsopSolution sol;
  sol.b1 = RatMatrix(inst.dim_v, inst.dim_w);
  sol.b2 = RatMatrix(inst.dim_w, inst.dim_v);
  sol.a12 = RatMatrix(inst.dim_v, inst.dim_z1);
  sol.a21 = RatMatrix(inst.dim_z2, inst.dim_v);
  sol.a22 = RatMatrix::identity(inst.dim_z1);
  sol.t = block({{RatMatrix::identity(inst.dim_v) - sol.b1 * sol.b2, sol.a12},
                 {sol.a21, sol.a22}});
  return sol;
}

// Membership of x in { I - b1 b2 : b1 through a dim_w space }: possible
// exactly when rank(I - x) <= dim_w, since a rank-rho map factors through
// rho dimensions and nothing smaller. The factorization returned is the
// column-space basis of I - x padded to width dim_w, against the matching
// coordinate rows.
inline std::optional<std::pair<RatMatrix, RatMatrix>> k_membership(const RatMatrix& x,
                                                                   std::size_t dim_w) {
  if (!x.is_square()) throw NotSquare("membership is defined for square operators");
  const std::size_t v = x.rows();
  const RatMatrix k = RatMatrix::identity(v) - x;
  const Rref r = rref(k);
  const std::size_t rho = r.pivots.size();
  if (rho > dim_w) return std::nullopt;

  // k = (pivot columns) * (nonzero reduced rows), exactly.
  RatMatrix cb(v, rho);
  for (std::size_t j = 0; j < rho; ++j)
    for (std::size_t i = 0; i < v; ++i) cb(i, j) = k(i, r.pivots[j]);
  const RatMatrix gamma = r.mat.slice(0, rho, 0, v);

  const RatMatrix b1 = hcat(cb, RatMatrix(v, dim_w - rho));
  const RatMatrix b2 = vcat(gamma, RatMatrix(dim_w - rho, v));
  return std::make_pair(b1, b2);
}

// Finds invertible g with g f in the membership set: correct f by a
// minimal-rank map k sending Ker f onto a complement of Ran f, so h = f + k
// is invertible; then g = h^-1 and I - g f has rank nullity(f). Empty when
// that rank does not fit through the coupling space.
inline std::optional<RatMatrix> normalize_to_k(const RatMatrix& f, std::size_t dim_w) {
  if (!f.is_square()) throw NotSquare("normalization is defined for square operators");
  const std::size_t p = nullity(f);
  if (p > dim_w) return std::nullopt;
  if (p == 0) return inverse(f);

  const Basis kb = kernel_basis(f);
  const Basis coker = complement(column_space_basis(f));
  const RatMatrix k = coker.vectors * left_inverse(kb);
  return inverse(f + k);
}

// The witness corner is recovered from t by undoing the core of v:
// e21 = t * diag(v_core^-1, I).
inline RatMatrix e21_from_t(const BsopSolution& sol, const RatMatrix& v_core) {
  if (!v_core.is_square() || !is_invertible(v_core))
    throw SingularCore("core must be square invertible");
  if (sol.t.cols() < v_core.cols())
    throw DimensionMismatch("core larger than the domain of t");
  const std::size_t z = sol.t.cols() - v_core.cols();
  return sol.t * block_diag(inverse(v_core), RatMatrix::identity(z));
}

// The canonical equivalent pair attached to an instance: u = diag(u_core, 0)
// and v = diag(v_core, 0), both padded by the common extension dimension.
inline std::pair<RatMatrix, RatMatrix> eae_pair_from_bsop(const BsopInstance& inst,
                                                          const RatMatrix& u_core,
                                                          const RatMatrix& v_core) {
  if (!check_banprops(inst))
    throw BanPropsViolated("extension spaces must have equal dimension");
  if (u_core.rows() != inst.dim_w || !u_core.is_square() || !is_invertible(u_core))
    throw SingularCore("u core must be invertible of the w dimension");
  if (v_core.rows() != inst.dim_v || !v_core.is_square() || !is_invertible(v_core))
    throw SingularCore("v core must be invertible of the v dimension");
  const RatMatrix zero_ext(inst.dim_z1, inst.dim_z1);
  return {block_diag(u_core, zero_ext), block_diag(v_core, zero_ext)};
}

}  // namespace opcouple
