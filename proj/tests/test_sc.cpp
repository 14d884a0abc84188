#include <catch2/catch_amalgamated.hpp>

#include <opcouple/rng.hpp>
#include <opcouple/sc.hpp>

using namespace opcouple;

TEST_CASE("schur complements") {
  SECTION("scalar example") {
    const auto [u, v] = schur_complements(
        ScWitness{RatMatrix{{1}}, RatMatrix{{1}}, RatMatrix{{1}}, RatMatrix{{2}}});
    CHECK(u == RatMatrix{{Rational(1, 2)}});
    CHECK(v == RatMatrix{{1}});
  }
  SECTION("decoupled blocks") {
    const RatMatrix a{{2, 1}, {1, 1}};
    const RatMatrix d{{3}};
    const auto [u, v] = schur_complements(ScWitness{a, RatMatrix(2, 1), RatMatrix(1, 2), d});
    CHECK(u == a);
    CHECK(v == d);
  }
  SECTION("all-ones scalars cancel") {
    const auto [u, v] = schur_complements(
        ScWitness{RatMatrix{{1}}, RatMatrix{{1}}, RatMatrix{{1}}, RatMatrix{{1}}});
    CHECK(u.is_zero());
    CHECK(v.is_zero());
  }
  SECTION("singular diagonal blocks are rejected") {
    CHECK_THROWS_AS(schur_complements(ScWitness{RatMatrix(1, 1), RatMatrix{{1}}, RatMatrix{{1}},
                                                RatMatrix{{1}}}),
                    SingularBlock);
  }
  SECTION("non-assembling blocks are rejected") {
    CHECK_THROWS_AS(schur_complements(ScWitness{RatMatrix::identity(2), RatMatrix(1, 1),
                                                RatMatrix(1, 2), RatMatrix::identity(1)}),
                    DimensionMismatch);
  }
}

TEST_CASE("verify_sc") {
  CHECK(verify_sc(RatMatrix(1, 1), RatMatrix(1, 1),
                  ScWitness{RatMatrix{{1}}, RatMatrix{{1}}, RatMatrix{{1}}, RatMatrix{{1}}}));

  const RatMatrix u{{2, 1}, {1, 1}};
  const RatMatrix v{{5}};
  CHECK(verify_sc(u, v, ScWitness{u, RatMatrix(2, 1), RatMatrix(1, 2), v}));

  const RatMatrix singular{{1, 0}, {0, 0}};
  CHECK_THROWS_AS(
      verify_sc(singular, v, ScWitness{singular, RatMatrix(2, 1), RatMatrix(1, 2), v}),
      SingularBlock);
  CHECK_THROWS_AS(verify_sc(RatMatrix(1, 1), v,
                            ScWitness{u, RatMatrix(2, 1), RatMatrix(1, 2), v}),
                  DimensionMismatch);
}

TEST_CASE("strong witness corner test") {
  SECTION("invertible pair with zero parameters passes") {
    const RatMatrix u{{3}};
    const auto [params, iso] = seae_params(u, u);
    const EaeWitness w = build_eae_witness(u, u, iso, params);
    CHECK(seae_test(w.e, w.f, extension_split(u, u)));
  }
  SECTION("kernel with zero parameters fails on the e corner") {
    const RatMatrix u{{1, 0}, {0, 0}};
    const auto iso = eae_test(u, u);
    REQUIRE(iso.has_value());
    const EaeWitness w = build_eae_witness(u, u, *iso, zero_params(u, u));
    CHECK_FALSE(seae_test(w.e, w.f, extension_split(u, u)));
  }
  SECTION("the f corner of a special-form witness is always the identity") {
    Rng rng(61);
    const RatMatrix u = random_rank_matrix(rng, 3, 3, 2);
    const RatMatrix v = random_rank_matrix(rng, 4, 4, 3);
    const auto iso = eae_test(u, v);
    REQUIRE(iso.has_value());
    const EaeWitness w =
        build_eae_witness(u, v, *iso, random_params(rng, eae_sizes(decompose(u), decompose(v))));
    const ExtensionSplit sp = extension_split(u, v);
    CHECK(w.f.slice(0, sp.dom_v, sp.dom_u, w.f.cols()).is_identity());
  }
}

TEST_CASE("coupling construction") {
  SECTION("rank-one projection pair") {
    const RatMatrix u{{1, 0}, {0, 0}};
    const ScWitness m = sc_construct(u, u);
    CHECK(m.a == RatMatrix::identity(2));
    CHECK(m.d == RatMatrix::identity(2));
    CHECK(m.b == RatMatrix{{0, 0}, {0, 1}});
    CHECK(m.c == RatMatrix{{0, 0}, {0, 1}});
    CHECK(verify_sc(u, u, m));
  }
  SECTION("invertible pair decouples") {
    const RatMatrix u{{2, 1}, {1, 1}};
    const RatMatrix v{{4}};
    const ScWitness m = sc_construct(u, v);
    CHECK(m.a == u);
    CHECK(m.d == v);
    CHECK(m.b.is_zero());
    CHECK(m.c.is_zero());
    CHECK(verify_sc(u, v, m));
  }
  SECTION("rejections") {
    CHECK_THROWS_AS(sc_construct(RatMatrix(2, 3), RatMatrix(3, 3)), NotSquare);
    CHECK_THROWS_AS(sc_construct(RatMatrix(2, 2), RatMatrix(3, 3)), NotEae);
  }
}

TEST_CASE("strong witness parameters") {
  SECTION("zero scalar needs the kernel-cokernel identification") {
    const RatMatrix z{{0}};
    const auto [params, iso] = seae_params(z, z);
    CHECK(params.x4 == RatMatrix::identity(1));
    const EaeWitness w = build_eae_witness(z, z, iso, params);
    CHECK(seae_test(w.e, w.f, extension_split(z, z)));
  }
  SECTION("invertible pair has empty x4") {
    const RatMatrix u{{5}};
    const auto [params, iso] = seae_params(u, u);
    CHECK(params.x4 == RatMatrix(0, 0));
  }
  SECTION("rejections") {
    CHECK_THROWS_AS(seae_params(RatMatrix(2, 3), RatMatrix(3, 3)), NotSquare);
    CHECK_THROWS_AS(seae_params(RatMatrix(1, 1), RatMatrix(2, 2)), NotEae);
  }
}

TEST_CASE("coupling properties under fuzzing") {
  Rng rng(67);

  SECTION("schur complement outputs always share defect dimensions") {
    for (int trial = 0; trial < 30; ++trial) {
      ScWitness m;
      const std::size_t nx = rng.size_in(0, 5), ny = rng.size_in(0, 5);
      m.a = random_invertible(rng, nx);
      m.d = random_invertible(rng, ny);
      m.b = random_matrix(rng, nx, ny);
      m.c = random_matrix(rng, ny, nx);
      const auto [u, v] = schur_complements(m);
      CHECK(nullity(u) == nullity(v));
      CHECK(corank(u) == corank(v));
      CHECK(verify_sc(u, v, m));
      // swapping the witness couples the pair the other way round
      CHECK(verify_sc(v, u, ScWitness{m.d, m.c, m.b, m.a}));
    }
  }

  SECTION("every square equivalent pair is coupled") {
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t nu = rng.size_in(0, 6), nv = rng.size_in(0, 6);
      const std::size_t p = rng.size_in(0, std::min(nu, nv));
      const RatMatrix u = random_rank_matrix(rng, nu, nu, nu - p);
      const RatMatrix v = random_rank_matrix(rng, nv, nv, nv - p);
      CHECK(verify_sc(u, v, sc_construct(u, v)));
      const auto [params, iso] = seae_params(u, v);
      const EaeWitness w = build_eae_witness(u, v, iso, params);
      CHECK(seae_test(w.e, w.f, extension_split(u, v)));
    }
  }

  SECTION("coupled factors have symmetric defects") {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = rng.size_in(0, 6), m = rng.size_in(0, 6);
      const RatMatrix b1 = random_matrix(rng, n, m);
      const RatMatrix b2 = random_matrix(rng, m, n);
      CHECK(nullity(RatMatrix::identity(n) - b1 * b2) ==
            nullity(RatMatrix::identity(m) - b2 * b1));
    }
  }
}
