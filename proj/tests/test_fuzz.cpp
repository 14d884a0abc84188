#include <catch2/catch_amalgamated.hpp>

#include <opcouple/fuzz.hpp>

using namespace opcouple;

TEST_CASE("instance generation is deterministic") {
  FuzzConfig cfg;
  cfg.seed = 1;
  for (InstanceKind kind : all_kinds()) {
    const Json a = generate_instance(cfg, kind, 0);
    const Json b = generate_instance(cfg, kind, 0);
    CHECK(a.dump() == b.dump());
    CHECK(generate_instance(cfg, kind, 1).dump() != a.dump());
  }
}

TEST_CASE("generated instances satisfy their advertised shape") {
  FuzzConfig cfg;
  cfg.seed = 2;

  SECTION("bsop instances have equal extensions") {
    for (std::size_t t = 0; t < 10; ++t) {
      const Json j = generate_instance(cfg, InstanceKind::BsopInstance, t);
      CHECK(j["dims"]["z1"] == j["dims"]["z2"]);
    }
  }
  SECTION("rect-fredholm instances are surjective with the recorded nullity") {
    for (std::size_t t = 0; t < 10; ++t) {
      const Json j = generate_instance(cfg, InstanceKind::RectFredholm, t);
      const RatMatrix f = matrix_from_json(j["f"]);
      const auto [r, nul] = rank_nullity(f);
      CHECK(r == f.rows());
      CHECK(nul == j["nullity"].get<std::size_t>());
    }
  }
  SECTION("eae pairs have matching defect dimensions") {
    for (std::size_t t = 0; t < 10; ++t) {
      const Json j = generate_instance(cfg, InstanceKind::EaePair, t);
      const RatMatrix u = matrix_from_json(j["u"]);
      const RatMatrix v = matrix_from_json(j["v"]);
      CHECK(eae_test(u, v).has_value());
    }
  }
}

TEST_CASE("trials pass and shard deterministically") {
  FuzzConfig cfg;
  cfg.seed = 7;
  cfg.trials = 6;
  cfg.max_dim = 4;

  const FuzzReport serial = run_fuzz(cfg, all_kinds(), 1);
  CHECK(serial.pass());
  CHECK(serial.trials.size() == cfg.trials);

  const FuzzReport parallel = run_fuzz(cfg, all_kinds(), 3);
  REQUIRE(parallel.trials.size() == serial.trials.size());
  for (std::size_t t = 0; t < serial.trials.size(); ++t) {
    REQUIRE(parallel.trials[t].size() == serial.trials[t].size());
    for (std::size_t c = 0; c < serial.trials[t].size(); ++c) {
      CHECK(parallel.trials[t][c].name == serial.trials[t][c].name);
      CHECK(parallel.trials[t][c].pass == serial.trials[t][c].pass);
    }
  }
}

TEST_CASE("index reports carry the certificate fields") {
  const Json c = index_cert_to_json(index(RatMatrix(3, 5)));
  CHECK(c["index"] == 2);
  CHECK(c["nullity"] == 5);
  CHECK(c["corank"] == 3);

  const Json bk = bookkeeping_to_json(kernel_bookkeeping(RatMatrix::identity(3), 1));
  CHECK(bk["nullity_t1"] == 1);
  CHECK(bk["nullity_identity"] == true);
  CHECK(bk["corank_identity"] == true);
}

TEST_CASE("witness bundles survive a JSON round trip") {
  Rng rng(137);
  const RatMatrix u = random_rank_matrix(rng, 3, 3, 2);
  const RatMatrix v = random_rank_matrix(rng, 2, 2, 1);
  const auto iso = eae_test(u, v);
  REQUIRE(iso.has_value());
  const EaeWitness w =
      build_eae_witness(u, v, *iso, random_params(rng, eae_sizes(decompose(u), decompose(v))));
  const Json bundle = witness_to_json(w);
  CHECK(matrix_from_json(bundle["e"]) == w.e);
  CHECK(matrix_from_json(bundle["f"]) == w.f);
  CHECK(matrix_from_json(bundle["f_inv_claimed"]) == w.f_inv_claimed);
  CHECK(matrix_from_json(bundle["params"]["y3"]) == w.params.y3);
  // a consumer can re-verify the relation from the bundle alone
  CHECK(verify_eae(u, v, matrix_from_json(bundle["e"]), matrix_from_json(bundle["f"])));
}
