#pragma once

#include <string>

#include <json.hpp>

#include <opcouple/bsop.hpp>
#include <opcouple/decomp.hpp>
#include <opcouple/eae.hpp>
#include <opcouple/fredholm.hpp>
#include <opcouple/matrix.hpp>
#include <opcouple/sc.hpp>

namespace opcouple {

// Insertion-ordered JSON keeps serialized output byte-stable.
using Json = nlohmann::ordered_json;

// Library-wide matrix encoding:
//   {"rows": m, "cols": n, "entries": [["p/q", ...], ...]}
// with one inner array per row, entries as decimal integer strings with an
// optional "/" denominator. Matrices with a zero dimension encode with
// "entries": [].
inline Json matrix_to_json(const RatMatrix& m) {
  Json entries = Json::array();
  if (!m.is_empty()) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
      entries.push_back(std::move(row));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline RatMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw ParseError("matrix JSON needs rows, cols and entries");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw ParseError("matrix dimensions must be non-negative integers");
  const std::size_t rows = j["rows"].get<std::size_t>();
  const std::size_t cols = j["cols"].get<std::size_t>();
  const Json& entries = j["entries"];
  if (!entries.is_array()) throw ParseError("matrix entries must be an array of rows");

  RatMatrix m(rows, cols);
  if (rows == 0 || cols == 0) {
    if (!entries.empty()) throw ParseError("zero-dimensional matrix must have empty entries");
    return m;
  }
  if (entries.size() != rows) throw ParseError("matrix entry rows do not match the shape");
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = entries[i];
    if (!row.is_array() || row.size() != cols)
      throw ParseError("matrix entry row does not match the shape");
    for (std::size_t jx = 0; jx < cols; ++jx) {
      if (!row[jx].is_string()) throw ParseError("matrix entries must be rational strings");
      m(i, jx) = Rational::from_string(row[jx].get<std::string>());
    }
  }
  return m;
}

inline Json decomposition_to_json(const RelRegDecomposition& d) {
  return Json{{"x1", matrix_to_json(d.x1.vectors)},   {"x2", matrix_to_json(d.x2.vectors)},
              {"x1p", matrix_to_json(d.x1p.vectors)}, {"x2p", matrix_to_json(d.x2p.vectors)},
              {"core", matrix_to_json(d.core)},       {"r", matrix_to_json(d.r)},
              {"s", matrix_to_json(d.s)}};
}

inline Json witness_to_json(const EaeWitness& w) {
  return Json{{"e", matrix_to_json(w.e)},
              {"f", matrix_to_json(w.f)},
              {"f_inv_claimed", matrix_to_json(w.f_inv_claimed)},
              {"params",
               Json{{"y1", matrix_to_json(w.params.y1)},
                    {"y2", matrix_to_json(w.params.y2)},
                    {"y3", matrix_to_json(w.params.y3)},
                    {"x2", matrix_to_json(w.params.x2)},
                    {"x3", matrix_to_json(w.params.x3)},
                    {"x4", matrix_to_json(w.params.x4)},
                    {"x6", matrix_to_json(w.params.x6)}}},
              {"iso",
               Json{{"e_prime", matrix_to_json(w.iso.e_prime)},
                    {"f_prime", matrix_to_json(w.iso.f_prime)}}}};
}

inline Json sc_witness_to_json(const ScWitness& m) {
  return Json{{"a", matrix_to_json(m.a)},
              {"b", matrix_to_json(m.b)},
              {"c", matrix_to_json(m.c)},
              {"d", matrix_to_json(m.d)}};
}

inline ScWitness sc_witness_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("c") ||
      !j.contains("d"))
    throw ParseError("coupling witness JSON needs blocks a, b, c, d");
  return ScWitness{matrix_from_json(j["a"]), matrix_from_json(j["b"]), matrix_from_json(j["c"]),
                   matrix_from_json(j["d"])};
}

inline Json index_cert_to_json(const IndexCert& c) {
  return Json{{"index", c.index}, {"nullity", c.nullity}, {"corank", c.corank}};
}

inline Json bookkeeping_to_json(const KernelBookkeeping& bk) {
  return Json{{"nullity_t1", bk.nullity_t1},
              {"nullity_t11", bk.nullity_t11},
              {"corank_t1", bk.corank_t1},
              {"corank_t11", bk.corank_t11},
              {"nullity_identity", bk.nullity_identity},
              {"corank_identity", bk.corank_identity}};
}

inline Json bsop_to_json(const BsopInstance& inst, const BsopSolution& sol) {
  return Json{{"dims",
               Json{{"v", inst.dim_v}, {"w", inst.dim_w}, {"z1", inst.dim_z1},
                    {"z2", inst.dim_z2}}},
              {"solution",
               Json{{"b1", matrix_to_json(sol.b1)}, {"b2", matrix_to_json(sol.b2)},
                    {"a12", matrix_to_json(sol.a12)}, {"a21", matrix_to_json(sol.a21)},
                    {"a22", matrix_to_json(sol.a22)}, {"t", matrix_to_json(sol.t)}}}};
}

}  // namespace opcouple
