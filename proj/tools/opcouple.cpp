// Command-line front end: matrix I/O, one subcommand per pipeline, a seeded
// fuzz harness, and machine-readable verification reports.
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed or the
// relation does not hold, 2 usage or I/O error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <opcouple/fuzz.hpp>
#include <opcouple/json_io.hpp>

namespace {

using opcouple::Json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw opcouple::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

opcouple::RatMatrix read_matrix(const std::string& path, std::uint64_t& digest) {
  const std::string bytes = read_file(path);
  digest = fnv1a(bytes, digest);
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const nlohmann::json::exception& ex) {
    throw opcouple::ParseError(path + ": " + ex.what());
  }
  return opcouple::matrix_from_json(j);
}

Json read_json(const std::string& path, std::uint64_t& digest) {
  const std::string bytes = read_file(path);
  digest = fnv1a(bytes, digest);
  try {
    return Json::parse(bytes);
  } catch (const nlohmann::json::exception& ex) {
    throw opcouple::ParseError(path + ": " + ex.what());
  }
}

// Accumulates named pass/fail checks and renders the report, either as
// human-readable lines or as a single versioned JSON object. Failing checks
// carry their witness payload inline so they can be re-checked offline.
class Reporter {
 public:
  Reporter(std::string command, bool json_mode)
      : command_(std::move(command)),
        json_mode_(json_mode),
        start_(std::chrono::steady_clock::now()) {}

  void set_inputs(std::uint64_t digest, Json extra = Json()) {
    inputs_ = Json{{"digest", hex64(digest)}};
    if (!extra.is_null())
      for (auto& [k, v] : extra.items()) inputs_[k] = v;
  }

  void check(const std::string& name, bool pass, Json witness = Json()) {
    Json c{{"name", name}, {"pass", pass}};
    if (!pass && !witness.is_null()) c["witness"] = std::move(witness);
    checks_.push_back(std::move(c));
    all_pass_ = all_pass_ && pass;
  }

  void result(Json r) { result_ = std::move(r); }

  bool all_pass() const { return all_pass_; }

  int finish(const std::optional<std::string>& out_path = std::nullopt) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    if (out_path && !result_.is_null()) {
      std::ofstream out(*out_path);
      if (!out) throw opcouple::ParseError("cannot write " + *out_path);
      out << result_.dump(2) << "\n";
    }
    if (json_mode_) {
      Json report{{"schema", "opcouple/1"},
                  {"command", command_},
                  {"inputs", inputs_},
                  {"checks", checks_},
                  {"pass", all_pass_}};
      if (!result_.is_null() && !out_path) report["result"] = result_;
      report["elapsed_ms"] = elapsed;
      std::cout << report.dump(2) << "\n";
    } else {
      for (const auto& c : checks_)
        std::cout << c["name"].get<std::string>() << ": "
                  << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
      std::cout << "overall: " << (all_pass_ ? "PASS" : "FAIL") << " (" << checks_.size()
                << " checks, " << elapsed << " ms)\n";
      if (!result_.is_null() && !out_path) std::cout << result_.dump(2) << "\n";
    }
    return all_pass_ ? kExitPass : kExitCheckFailed;
  }

 private:
  std::string command_;
  bool json_mode_;
  std::chrono::steady_clock::time_point start_;
  Json inputs_ = Json::object();
  std::vector<Json> checks_;
  Json result_;
  bool all_pass_ = true;
};

long entry_bound_default() {
  if (const char* env = std::getenv("OPCOUPLE_ENTRY_BOUND")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return v;
  }
  return opcouple::kDefaultEntryBound;
}

int cmd_decompose(const std::string& u_path, bool json_mode,
                  const std::optional<std::string>& out) {
  Reporter rep("decompose", json_mode);
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  const auto u = read_matrix(u_path, digest);
  rep.set_inputs(digest);

  const auto d = opcouple::decompose(u);
  rep.check("decomposition_valid", opcouple::verify_decomposition(u, d));
  Json result = opcouple::decomposition_to_json(d);
  result["rank"] = d.x1p.dim();
  result["nullity"] = d.x2.dim();
  result["corank"] = d.x2p.dim();
  rep.result(std::move(result));
  return rep.finish(out);
}

int cmd_eae_check(const std::string& u_path, const std::string& v_path, bool json_mode) {
  Reporter rep("eae-check", json_mode);
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  const auto u = read_matrix(u_path, digest);
  const auto v = read_matrix(v_path, digest);
  rep.set_inputs(digest);

  const auto [rank_u, nullity_u] = opcouple::rank_nullity(u);
  const auto [rank_v, nullity_v] = opcouple::rank_nullity(v);
  rep.result(Json{{"nullity_u", nullity_u},
                  {"corank_u", u.rows() - rank_u},
                  {"nullity_v", nullity_v},
                  {"corank_v", v.rows() - rank_v}});
  rep.check("eae", opcouple::eae_test(u, v).has_value());
  return rep.finish();
}

int cmd_eae_witness(const std::string& u_path, const std::string& v_path, bool json_mode,
                    bool random, std::uint64_t seed, long bound,
                    const std::optional<std::string>& out) {
  Reporter rep("eae-witness", json_mode);
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  const auto u = read_matrix(u_path, digest);
  const auto v = read_matrix(v_path, digest);
  rep.set_inputs(digest, Json{{"params", random ? "random" : "zero"}, {"seed", seed}});

  const auto iso = opcouple::eae_test(u, v);
  rep.check("eae", iso.has_value());
  if (!iso) return rep.finish();

  const auto du = opcouple::decompose(u);
  const auto dv = opcouple::decompose(v);
  const auto sz = opcouple::eae_sizes(du, dv);
  opcouple::WitnessParams params = opcouple::zero_params(sz);
  if (random) {
    opcouple::Rng rng(seed);
    params = opcouple::random_params(rng, sz, bound);
  }
  const auto w = opcouple::build_eae_witness(u, v, *iso, params);
  rep.check("verify_eae", opcouple::verify_eae(u, v, w.e, w.f));
  rep.check("special_form", opcouple::check_special_form(w.e, w.f, u, v));
  rep.check("eae_condition", opcouple::verify_eae_condition(du, dv, w.e, w.f));
  rep.check("f_inverse_closed_form", (w.f * w.f_inv_claimed).is_identity());
  rep.result(opcouple::witness_to_json(w));
  return rep.finish(out);
}

int cmd_sc_build(const std::string& u_path, const std::string& v_path, bool json_mode,
                 const std::optional<std::string>& out) {
  Reporter rep("sc-build", json_mode);
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  const auto u = read_matrix(u_path, digest);
  const auto v = read_matrix(v_path, digest);
  rep.set_inputs(digest);

  if (!opcouple::eae_test(u, v)) {
    rep.check("eae", false);
    return rep.finish();
  }
  rep.check("eae", true);
  const auto m = opcouple::sc_construct(u, v);
  rep.check("verify_sc", opcouple::verify_sc(u, v, m));
  rep.result(opcouple::sc_witness_to_json(m));
  return rep.finish(out);
}

int cmd_sc_verify(const std::string& u_path, const std::string& v_path,
                  const std::string& m_path, bool json_mode, bool per_identity) {
  Reporter rep("sc-verify", json_mode);
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  const auto u = read_matrix(u_path, digest);
  const auto v = read_matrix(v_path, digest);
  const auto m = opcouple::sc_witness_from_json(read_json(m_path, digest));
  rep.set_inputs(digest);

  const bool a_inv = opcouple::is_invertible(m.a);
  const bool d_inv = opcouple::is_invertible(m.d);
  if (per_identity) {
    rep.check("a_invertible", a_inv);
    rep.check("d_invertible", d_inv);
  }
  if (!a_inv || !d_inv) {
    rep.check("verify_sc", false, opcouple::sc_witness_to_json(m));
    return rep.finish();
  }
  const auto [su, sv] = opcouple::schur_complements(m);
  if (per_identity) {
    rep.check("first_schur_complement_matches", su == u);
    rep.check("second_schur_complement_matches", sv == v);
  }
  rep.check("verify_sc", su == u && sv == v,
            Json{{"computed_u", opcouple::matrix_to_json(su)},
                 {"computed_v", opcouple::matrix_to_json(sv)}});
  return rep.finish();
}

int cmd_bsop(std::size_t dim_v, std::size_t dim_w, std::size_t dim_z1, std::size_t dim_z2,
             bool json_mode, const std::optional<std::string>& out) {
  Reporter rep("bsop", json_mode);
  const opcouple::BsopInstance inst{dim_v, dim_w, dim_z1, dim_z2};
  const Json dims{{"v", dim_v}, {"w", dim_w}, {"z1", dim_z1}, {"z2", dim_z2}};
  rep.set_inputs(fnv1a(dims.dump()), Json{{"dims", dims}});

  rep.check("banprops", opcouple::check_banprops(inst), dims);
  if (!opcouple::check_banprops(inst)) return rep.finish();
  const auto sol = opcouple::solve_bsop(inst);
  rep.check("t_invertible", opcouple::is_invertible(sol.t));
  rep.result(opcouple::bsop_to_json(inst, sol));
  return rep.finish(out);
}

int cmd_fuzz(const opcouple::FuzzConfig& cfg, const std::vector<std::string>& kind_names,
             std::size_t workers, bool json_mode) {
  Reporter rep("fuzz", json_mode);
  std::vector<opcouple::InstanceKind> kinds;
  for (const auto& name : kind_names) {
    bool found = false;
    for (auto k : opcouple::all_kinds())
      if (name == opcouple::kind_name(k)) {
        kinds.push_back(k);
        found = true;
      }
    if (!found) throw CLI::ValidationError("--kind", "unknown instance kind: " + name);
  }
  if (kinds.empty()) kinds = opcouple::all_kinds();

  Json cfg_json{{"seed", cfg.seed},
                {"trials", cfg.trials},
                {"max_dim", cfg.max_dim},
                {"entry_bound", cfg.entry_bound}};
  rep.set_inputs(fnv1a(cfg_json.dump()), Json{{"config", cfg_json}});

  const auto report = opcouple::run_fuzz(cfg, kinds, workers);
  if (json_mode) {
    for (const auto& trial : report.trials)
      for (const auto& c : trial) rep.check(c.name, c.pass, c.witness);
  } else {
    // Human mode stays readable: one line per trial, details only on failure.
    for (std::size_t t = 0; t < report.trials.size(); ++t) {
      bool trial_pass = true;
      for (const auto& c : report.trials[t]) trial_pass = trial_pass && c.pass;
      rep.check("trial-" + std::to_string(t), trial_pass);
      if (!trial_pass)
        for (const auto& c : report.trials[t])
          if (!c.pass) std::cerr << "failed: " << c.name << "\n" << c.witness.dump(2) << "\n";
    }
  }
  return rep.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact witnesses for operator equivalence after extension and Schur coupling"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "emit a single JSON report on stdout");

  std::string u_path, v_path, m_path;
  std::optional<std::string> out_path;

  auto* sub_decompose = app.add_subcommand("decompose", "split a matrix into its invertible core");
  sub_decompose->add_option("matrix", u_path, "matrix JSON file")->required();
  sub_decompose->add_option("-o,--out", out_path, "write the decomposition JSON here");

  auto* sub_check = app.add_subcommand("eae-check", "decide equivalence after extension");
  sub_check->add_option("u", u_path, "first matrix JSON file")->required();
  sub_check->add_option("v", v_path, "second matrix JSON file")->required();

  bool random_params = false;
  std::uint64_t seed = 0;
  long bound = entry_bound_default();
  auto* sub_witness = app.add_subcommand("eae-witness", "construct a special-form witness pair");
  sub_witness->add_option("u", u_path, "first matrix JSON file")->required();
  sub_witness->add_option("v", v_path, "second matrix JSON file")->required();
  sub_witness->add_flag("--random-params", random_params,
                        "draw the free parameter blocks at random (default: zero)");
  sub_witness->add_option("--seed", seed, "seed for --random-params");
  sub_witness->add_option("--entry-bound", bound, "magnitude bound for random entries");
  sub_witness->add_option("-o,--out", out_path, "write the witness bundle JSON here");

  auto* sub_sc_build = app.add_subcommand("sc-build", "construct a Schur coupling witness");
  sub_sc_build->add_option("u", u_path, "first matrix JSON file")->required();
  sub_sc_build->add_option("v", v_path, "second matrix JSON file")->required();
  sub_sc_build->add_option("-o,--out", out_path, "write the coupling witness JSON here");

  bool per_identity = false;
  auto* sub_sc_verify = app.add_subcommand("sc-verify", "verify a Schur coupling witness");
  sub_sc_verify->add_option("u", u_path, "first matrix JSON file")->required();
  sub_sc_verify->add_option("v", v_path, "second matrix JSON file")->required();
  sub_sc_verify->add_option("m", m_path, "coupling witness JSON file")->required();
  sub_sc_verify->add_flag("--check", per_identity, "report per-identity booleans");

  std::size_t dim_v = 0, dim_w = 0, dim_z1 = 0, dim_z2 = 0;
  auto* sub_bsop = app.add_subcommand("bsop", "solve the block operator problem for dimensions");
  sub_bsop->add_option("--dim-v", dim_v, "dimension of the coupled space")->required();
  sub_bsop->add_option("--dim-w", dim_w, "dimension of the middle space")->required();
  sub_bsop->add_option("--dim-z1", dim_z1, "dimension of the first extension")->required();
  sub_bsop->add_option("--dim-z2", dim_z2, "dimension of the second extension")->required();
  sub_bsop->add_option("-o,--out", out_path, "write the solution JSON here");

  opcouple::FuzzConfig cfg;
  cfg.entry_bound = entry_bound_default();
  std::vector<std::string> kind_names;
  std::size_t workers = 0;
  auto* sub_fuzz = app.add_subcommand("fuzz", "run seeded property trials over all pipelines");
  sub_fuzz->add_option("--seed", cfg.seed, "base seed; trial i uses seed + i");
  sub_fuzz->add_option("--trials", cfg.trials, "number of trials")->check(CLI::PositiveNumber);
  sub_fuzz->add_option("--max-dim", cfg.max_dim, "largest space dimension")
      ->check(CLI::PositiveNumber);
  sub_fuzz->add_option("--entry-bound", cfg.entry_bound, "magnitude bound for random entries");
  sub_fuzz->add_option("--kind", kind_names,
                       "instance kinds: eae-pair, sc-witness, bsop-instance, rect-fredholm");
  sub_fuzz->add_option("--workers", workers, "worker threads (default: hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sub_decompose) return cmd_decompose(u_path, json_mode, out_path);
    if (*sub_check) return cmd_eae_check(u_path, v_path, json_mode);
    if (*sub_witness)
      return cmd_eae_witness(u_path, v_path, json_mode, random_params, seed, bound, out_path);
    if (*sub_sc_build) return cmd_sc_build(u_path, v_path, json_mode, out_path);
    if (*sub_sc_verify) return cmd_sc_verify(u_path, v_path, m_path, json_mode, per_identity);
    if (*sub_bsop) return cmd_bsop(dim_v, dim_w, dim_z1, dim_z2, json_mode, out_path);
    if (*sub_fuzz) return cmd_fuzz(cfg, kind_names, workers, json_mode);
  } catch (const opcouple::NotEae& ex) {
    std::cerr << "relation does not hold: " << ex.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
