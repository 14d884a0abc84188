#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <opcouple/bsop.hpp>
#include <opcouple/decomp.hpp>
#include <opcouple/eae.hpp>
#include <opcouple/fredholm.hpp>
#include <opcouple/json_io.hpp>
#include <opcouple/rng.hpp>
#include <opcouple/sc.hpp>

namespace opcouple {

struct FuzzConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::size_t max_dim = 6;
  long entry_bound = kDefaultEntryBound;
};

enum class InstanceKind { EaePair, ScWitness, BsopInstance, RectFredholm };

inline const char* kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::EaePair: return "eae-pair";
    case InstanceKind::ScWitness: return "sc-witness";
    case InstanceKind::BsopInstance: return "bsop-instance";
    case InstanceKind::RectFredholm: return "rect-fredholm";
  }
  return "unknown";
}

inline std::vector<InstanceKind> all_kinds() {
  return {InstanceKind::EaePair, InstanceKind::ScWitness, InstanceKind::BsopInstance,
          InstanceKind::RectFredholm};
}

// Each trial derives its own seed as seed + trial index; kinds within a
// trial get decorrelated sub-streams.
inline Rng trial_rng(const FuzzConfig& cfg, InstanceKind kind, std::size_t trial) {
  const std::uint64_t base = cfg.seed + static_cast<std::uint64_t>(trial);
  return Rng(base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(kind) + 1));
}

namespace gen {

// Square pair with matching kernel and cokernel dimensions: cores padded by
// a common extension dimension, then conjugated by unimodular factors so
// the instances are not visibly block diagonal.
struct EaePairInstance {
  RatMatrix u, v;
};

inline EaePairInstance eae_pair(Rng& rng, std::size_t max_dim, long bound) {
  const std::size_t z = rng.size_in(0, max_dim / 2);
  const std::size_t w = rng.size_in(0, max_dim - z);
  const std::size_t v = rng.size_in(0, max_dim - z);
  const RatMatrix u0 = block_diag(random_invertible(rng, w, bound), RatMatrix(z, z));
  const RatMatrix v0 = block_diag(random_invertible(rng, v, bound), RatMatrix(z, z));
  EaePairInstance inst;
  inst.u = random_invertible(rng, w + z, bound) * u0 * random_invertible(rng, w + z, bound);
  inst.v = random_invertible(rng, v + z, bound) * v0 * random_invertible(rng, v + z, bound);
  return inst;
}

inline ScWitness sc_witness(Rng& rng, std::size_t max_dim, long bound) {
  const std::size_t nx = rng.size_in(0, max_dim);
  const std::size_t ny = rng.size_in(0, max_dim);
  ScWitness m;
  m.a = random_invertible(rng, nx, bound);
  m.d = random_invertible(rng, ny, bound);
  m.b = random_matrix(rng, nx, ny, bound);
  m.c = random_matrix(rng, ny, nx, bound);
  return m;
}

inline BsopInstance bsop_instance(Rng& rng, std::size_t max_dim) {
  BsopInstance inst;
  inst.dim_v = rng.size_in(0, max_dim);
  inst.dim_w = rng.size_in(0, max_dim);
  inst.dim_z1 = rng.size_in(0, max_dim / 2);
  inst.dim_z2 = inst.dim_z1;
  return inst;
}

struct RectFredholmInstance {
  RatMatrix f;  // surjective
  std::size_t nullity = 0;
};

inline RectFredholmInstance rect_fredholm(Rng& rng, std::size_t max_dim, long bound) {
  const std::size_t m = rng.size_in(1, max_dim);
  const std::size_t k = rng.size_in(0, max_dim - m > 0 ? max_dim - m : 0);
  RectFredholmInstance inst;
  inst.f = random_rank_matrix(rng, m, m + k, m, bound);
  inst.nullity = k;
  return inst;
}

}  // namespace gen

// Serialized instance for a given kind, deterministic in (seed, trial).
inline Json generate_instance(const FuzzConfig& cfg, InstanceKind kind, std::size_t trial) {
  Rng rng = trial_rng(cfg, kind, trial);
  Json j{{"kind", kind_name(kind)}, {"trial", trial}};
  switch (kind) {
    case InstanceKind::EaePair: {
      const auto inst = gen::eae_pair(rng, cfg.max_dim, cfg.entry_bound);
      j["u"] = matrix_to_json(inst.u);
      j["v"] = matrix_to_json(inst.v);
      break;
    }
    case InstanceKind::ScWitness: {
      j["m"] = sc_witness_to_json(gen::sc_witness(rng, cfg.max_dim, cfg.entry_bound));
      break;
    }
    case InstanceKind::BsopInstance: {
      const auto inst = gen::bsop_instance(rng, cfg.max_dim);
      j["dims"] = Json{{"v", inst.dim_v}, {"w", inst.dim_w}, {"z1", inst.dim_z1},
                       {"z2", inst.dim_z2}};
      break;
    }
    case InstanceKind::RectFredholm: {
      const auto inst = gen::rect_fredholm(rng, cfg.max_dim, cfg.entry_bound);
      j["f"] = matrix_to_json(inst.f);
      j["nullity"] = inst.nullity;
      break;
    }
  }
  return j;
}

struct CheckResult {
  std::string name;
  bool pass = false;
  Json witness;  // failing instance payload; null for passing checks
};

namespace detail {

struct TrialSink {
  std::string prefix;
  Json instance;
  std::vector<CheckResult>* out;

  void add(const std::string& check, bool ok) {
    out->push_back({prefix + "/" + check, ok, ok ? Json() : instance});
  }
};

inline void eae_pair_checks(Rng& rng, const gen::EaePairInstance& inst, long bound,
                            TrialSink& sink) {
  const auto iso = eae_test(inst.u, inst.v);
  sink.add("eae_test", iso.has_value());
  if (!iso) return;

  const RelRegDecomposition du = decompose(inst.u);
  const RelRegDecomposition dv = decompose(inst.v);
  const EaeSizes sz = eae_sizes(du, dv);
  const WitnessParams params = random_params(rng, sz, bound);
  const EaeWitness w = build_eae_witness(inst.u, inst.v, *iso, params);

  sink.add("verify_eae", verify_eae(inst.u, inst.v, w.e, w.f));
  sink.add("special_form", check_special_form(w.e, w.f, inst.u, inst.v));
  sink.add("eae_condition", verify_eae_condition(du, dv, w.e, w.f));
  sink.add("f_inverse_closed_form",
           (w.f * w.f_inv_claimed).is_identity() && (w.f_inv_claimed * w.f).is_identity());

  const RatMatrix middle = block({{-params.y3, RatMatrix::identity(sz.ru)},
                                  {RatMatrix::identity(sz.rv) + params.y1 * params.y3,
                                   -params.y1}});
  sink.add("middle_factor_invertible", is_invertible(middle));
  sink.add("eblock_invertible",
           is_invertible(eblock(du.core, dv.core, w.derived.x1, w.derived.x5, params.y1,
                                params.y3)));

  const auto [sparams, siso] = seae_params(inst.u, inst.v);
  const EaeWitness sw = build_eae_witness(inst.u, inst.v, siso, sparams);
  sink.add("seae", seae_test(sw.e, sw.f, extension_split(inst.u, inst.v)));
  sink.add("sc_construct", verify_sc(inst.u, inst.v, sc_construct(inst.u, inst.v)));
}

inline void sc_witness_checks(const ScWitness& m, TrialSink& sink) {
  const auto [u, v] = schur_complements(m);
  sink.add("verify_sc", verify_sc(u, v, m));
  sink.add("kernel_symmetry", nullity(u) == nullity(v) && corank(u) == corank(v));
  sink.add("swap_symmetry", verify_sc(v, u, ScWitness{m.d, m.c, m.b, m.a}));
}

inline void bsop_checks(Rng& rng, const BsopInstance& inst, std::size_t max_dim, long bound,
                        TrialSink& sink) {
  sink.add("banprops", check_banprops(inst));
  const BsopSolution sol = solve_bsop(inst);
  const RatMatrix expected_t =
      block({{RatMatrix::identity(inst.dim_v) - sol.b1 * sol.b2, sol.a12}, {sol.a21, sol.a22}});
  sink.add("solution_shape", sol.t == expected_t && is_invertible(sol.t));

  const RatMatrix v_core = random_invertible(rng, inst.dim_v, bound);
  sink.add("e21_invertible", is_invertible(e21_from_t(sol, v_core)));

  const RatMatrix u_core = random_invertible(rng, inst.dim_w, bound);
  const auto [u, v] = eae_pair_from_bsop(inst, u_core, v_core);
  const auto iso = eae_test(u, v);
  sink.add("pair_is_eae", iso.has_value());
  if (iso) {
    const auto [sparams, siso] = seae_params(u, v);
    const EaeWitness sw = build_eae_witness(u, v, siso, sparams);
    sink.add("pair_is_seae", seae_test(sw.e, sw.f, extension_split(u, v)));
  }

  const RatMatrix x = random_matrix(rng, inst.dim_v, inst.dim_v, bound);
  const auto membership = k_membership(x, inst.dim_w);
  const bool rank_fits =
      rank(RatMatrix::identity(inst.dim_v) - x) <= inst.dim_w;
  bool membership_ok = membership.has_value() == rank_fits;
  if (membership)
    membership_ok = membership_ok && membership->first * membership->second ==
                                         RatMatrix::identity(inst.dim_v) - x;
  sink.add("k_rank_criterion", membership_ok);
  sink.add("k_contains_zero_iff",
           k_membership(RatMatrix(inst.dim_v, inst.dim_v), inst.dim_w).has_value() ==
               (inst.dim_v <= inst.dim_w));

  const std::size_t nb = rng.size_in(0, max_dim);
  const std::size_t mb = rng.size_in(0, max_dim);
  const RatMatrix b1 = random_matrix(rng, nb, mb, bound);
  const RatMatrix b2 = random_matrix(rng, mb, nb, bound);
  sink.add("nullity_symmetry", nullity(RatMatrix::identity(nb) - b1 * b2) ==
                                   nullity(RatMatrix::identity(mb) - b2 * b1));
}

inline void rect_fredholm_checks(Rng& rng, const gen::RectFredholmInstance& inst,
                                 std::size_t max_dim, long bound, TrialSink& sink) {
  const IndexCert cert = index(inst.f);
  sink.add("index_shape_law",
           cert.index == static_cast<long>(inst.f.cols()) - static_cast<long>(inst.f.rows()) &&
               cert.nullity == inst.nullity && cert.corank == 0);

  const RatMatrix xi = complete_to_invertible(inst.f);
  const RatMatrix stack = vcat(inst.f, xi);
  sink.add("completion_invertible", is_invertible(stack));
  sink.add("extraction_recovers",
           extract_fredholm_from_iso(stack, inst.nullity) == inst.f);

  const std::size_t nv = rng.size_in(1, max_dim);
  const std::size_t nw = rng.size_in(0, max_dim);
  const RatMatrix b1 = random_matrix(rng, nv, nw, bound);
  const RatMatrix b2 = random_matrix(rng, nw, nv, bound);
  const NormalizationCert norm = normalize_injective(b1, b2);
  const RatMatrix x = RatMatrix::identity(nv) - b1 * b2;
  const RatMatrix x_new = RatMatrix::identity(nv) - norm.b1_new * norm.b2_new;
  sink.add("normalize_identity", x_new == x - norm.r);
  sink.add("normalize_injective", is_invertible(x_new));
  sink.add("normalize_cert",
           (norm.pi * norm.tau).is_identity() && is_invertible(norm.l_iso));

  const std::size_t nt = rng.size_in(1, max_dim);
  const RatMatrix t = random_invertible(rng, nt, bound);
  const std::size_t s1 = rng.size_in(0, nt), s2 = rng.size_in(0, nt);
  const CornerExtract corner = corner_extract(t, s1, nt - s1, s2, nt - s2);
  sink.add("corner_restriction_injective", nullity(corner.restricted) == 0);
  sink.add("corner_rank_split",
           rank(t.slice(0, s2, s1, nt)) + corner.kernel.dim() == nt - s1);

  const std::size_t fk = rng.size_in(0, nt);
  const KernelBookkeeping bk = kernel_bookkeeping(t, fk);
  sink.add("kernel_bookkeeping", bk.nullity_identity && bk.corank_identity);

  const std::size_t v1 = rng.size_in(0, max_dim / 2), v2 = rng.size_in(0, max_dim / 2);
  const RatMatrix t1 = random_matrix(rng, v1, v1, bound);
  const auto [kb1, kb2] = k_from_split(v1, v2, v1, v2, t1);
  sink.add("k_from_split", RatMatrix::identity(v1 + v2) - kb1 * kb2 ==
                               block_diag(t1, RatMatrix::identity(v2)));
}

}  // namespace detail

// Runs every check of one kind for one trial; the instance re-generated
// here is byte-identical to generate_instance for the same coordinates.
inline std::vector<CheckResult> run_trial(const FuzzConfig& cfg, InstanceKind kind,
                                          std::size_t trial) {
  std::vector<CheckResult> out;
  detail::TrialSink sink{"trial-" + std::to_string(trial) + "/" + kind_name(kind),
                         generate_instance(cfg, kind, trial), &out};
  Rng rng = trial_rng(cfg, kind, trial);
  try {
    switch (kind) {
      case InstanceKind::EaePair:
        detail::eae_pair_checks(rng, gen::eae_pair(rng, cfg.max_dim, cfg.entry_bound),
                                cfg.entry_bound, sink);
        break;
      case InstanceKind::ScWitness:
        detail::sc_witness_checks(gen::sc_witness(rng, cfg.max_dim, cfg.entry_bound), sink);
        break;
      case InstanceKind::BsopInstance:
        detail::bsop_checks(rng, gen::bsop_instance(rng, cfg.max_dim), cfg.max_dim,
                            cfg.entry_bound, sink);
        break;
      case InstanceKind::RectFredholm:
        detail::rect_fredholm_checks(rng, gen::rect_fredholm(rng, cfg.max_dim, cfg.entry_bound),
                                     cfg.max_dim, cfg.entry_bound, sink);
        break;
    }
  } catch (const std::exception& ex) {
    out.push_back({sink.prefix + "/exception: " + ex.what(), false, sink.instance});
  }
  return out;
}

struct FuzzReport {
  std::vector<std::vector<CheckResult>> trials;  // ordered by trial index

  bool pass() const {
    for (const auto& t : trials)
      for (const auto& c : t)
        if (!c.pass) return false;
    return true;
  }

  std::size_t check_count() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += t.size();
    return n;
  }
};

// Trials are independent pure computations; they are sharded across workers
// and collected by trial index, so the report does not depend on scheduling.
inline FuzzReport run_fuzz(const FuzzConfig& cfg, const std::vector<InstanceKind>& kinds,
                           std::size_t workers = 0) {
  FuzzReport report;
  report.trials.resize(cfg.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      std::vector<CheckResult> all;
      for (InstanceKind kind : kinds) {
        auto part = run_trial(cfg, kind, t);
        all.insert(all.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
      }
      report.trials[t] = std::move(all);
    }
  };
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers <= 1 || cfg.trials <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return report;
}

}  // namespace opcouple
