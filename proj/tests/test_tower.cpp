#include "catch_amalgamated.hpp"

#include <numeric>
#include <set>

#include "persist/sampling.hpp"
#include "persist/tower.hpp"

using namespace persist;

namespace {
  TowerContext const& ctx() {
    static TowerContext const c(MultiplicativeSeq::factorial2());
    return c;
  }

  GElement gp(char const* s) {
    return ctx().G().parse(s);
  }

  GElement random_g(Rng& rng, std::size_t syllables, std::size_t word_len) {
    return random_element(ctx().G(), rng, syllables,
                          [&](Rng& r) { return random_nontrivial_word(r, word_len); });
  }

  GElement random_yhat(Rng& rng) {
    Word n;
    for (;;) {
      auto hc = random_h_element(ctx().seq(), rng, 3, 4);
      if (hc.second % 2 == 0) {
        n = hc.first;
        break;
      }
    }
    Int q  = static_cast<long long>(rng() % 7) - 3;
    return ctx().G().mult(ctx().G().make(Side::L, n), ctx().G().pow(ctx().z(), q));
  }

  // Every subgroup of Q generated by at most two elements, by closure.
  std::set<std::vector<Perm>> two_generated_subgroups(FiniteGroup const& Q) {
    std::set<std::vector<Perm>> out;
    std::size_t n = Q.rep().degree();
    for (auto const& x : Q.elements()) {
      for (auto const& y : Q.elements()) {
        auto els = closure({x, y}, n);
        std::sort(els.begin(), els.end());
        out.insert(els);
      }
    }
    return out;
  }
}  // namespace

TEST_CASE("z and ell", "[tower]") {
  auto const& G = ctx().G();
  CHECK(G.print(ctx().z()) == "(L B^2)(R b^2)");
  CHECK(G.print(ctx().ell()) == "(L b^2)(R B^2)");
  auto h = G.make(Side::L, ctx().h());
  CHECK(G.equal(ctx().z(), G.mult(G.mult(G.invert(h), G.invert(ctx().ell())), h)));
  CHECK_FALSE(G.equal(ctx().z(), G.invert(ctx().ell())));
  CHECK(ctx().yhat_member(ctx().z()));
  CHECK(ctx().yhat_member(ctx().ell()));
  CHECK_FALSE(ctx().yhat_member(G.make(Side::L, Word(Gen::b, 2))));
  CHECK(G.equal(ctx().parse_g("z"), ctx().z()));
}

TEST_CASE("Klein pairs and tori", "[tower]") {
  auto const& G = ctx().G();
  for (std::size_t i = 0; i <= 4; ++i) {
    auto kp = ctx().klein_pair(i);
    CHECK(G.equal(G.pow(kp.first, 2), G.pow(kp.second, 2)));
    CHECK_FALSE(G.equal(kp.first, kp.second));
    auto tg = ctx().torus_gens(i);
    CHECK(ctx().yhat_member(tg.first));
    CHECK(ctx().yhat_member(tg.second));
    CHECK_FALSE(ctx().yhat_member(kp.first));
  }
  auto t0 = ctx().torus_gens(0);
  CHECK(G.equal(t0.first, gp("(L b^4)")));
  CHECK(G.equal(t0.second, gp("(L b^2)(R B^2)")));
  CHECK(G.equal(gp("(L b^4)"), gp("(R b^4)")));
}

TEST_CASE("T_i is K_i cap Yhat", "[tower][property]") {
  auto K = klein_engine();
  Rng rng(51);
  for (std::size_t i = 0; i <= 3; ++i) {
    for (int t = 0; t < 300; ++t) {
      auto k = random_element(K, rng, 1 + t % 5, [](Rng& r) {
        return Int(static_cast<long long>(r() % 7) - 3);
      });
      auto g  = ctx().klein_image(i, k);
      auto in = ctx().in_T(i, g);
      REQUIRE(in);
      CHECK(ctx().yhat_member(g) == *in);
      CHECK(klein_toolkit().is_translation(k) == *in);
    }
  }
}

TEST_CASE("D identifications", "[tower]") {
  auto const& D = ctx().D();
  CHECK(D.equal(ctx().lift(Side::L, ctx().z()), ctx().lift(Side::R, ctx().z())));
  auto g0 = ctx().g(0);
  auto x  = D.mult(ctx().lift(Side::L, g0), D.invert(ctx().lift(Side::R, g0)));
  CHECK(x.syllable_length() == 2);
  for (std::size_t i = 0; i <= 3; ++i) {
    auto p = ctx().promislow_gens(i);
    CHECK(D.equal(D.pow(p[0], 2), D.pow(p[2], 2)));
    CHECK(D.equal(D.mult(p[0], D.invert(p[1])), D.mult(p[2], D.invert(p[3]))));
    CHECK(D.equal(D.pow(p[0], 2), D.pow(p[1], 2)));
    CHECK_FALSE(D.equal(p[0], p[2]));
  }
  CHECK(D.equal(ctx().parse_d("gcheck2"), ctx().promislow_gens(2)[2]));
  CHECK(D.equal(ctx().parse_d("gbarcheck1"), ctx().promislow_gens(1)[3]));
  Rng rng(52);
  for (int t = 0; t < 100; ++t) {
    auto d = random_element(D, rng, 1 + t % 3, [&](Rng& r) { return random_g(r, 1 + r() % 2, 3); });
    CHECK(D.is_identity(D.mult(d, D.invert(d))));
    CHECK(D.equal(D.parse(D.print(d)), d));
  }
}

TEST_CASE("retractions are homomorphisms fixing the amalgamated subgroup", "[tower][property]") {
  auto const& G = ctx().G();
  auto const& D = ctx().D();
  Rng rng(53);
  for (int t = 0; t < 300; ++t) {
    auto x = random_g(rng, 1 + t % 4, 4);
    auto y = random_g(rng, 1 + t % 3, 4);
    CHECK(retract(G.mult(x, y)) == retract(x) * retract(y));
    auto n = random_h_element(ctx().seq(), rng, 3, 2).first;
    CHECK(retract(G.make(Side::R, n)) == n);
    auto dx = D.mult(ctx().lift(Side::L, x), ctx().lift(Side::R, y));
    CHECK(G.equal(ctx().retract_d(dx), G.mult(x, y)));
    auto yh = random_yhat(rng);
    CHECK(G.equal(ctx().retract_d(ctx().lift(Side::R, yh)), yh));
  }
}

TEST_CASE("Yhat is a subgroup and equals the centralizer of z", "[tower][property]") {
  auto const& G = ctx().G();
  Rng rng(54);
  for (int t = 0; t < 300; ++t) {
    auto x = random_yhat(rng);
    auto y = random_yhat(rng);
    CHECK(ctx().yhat_member(x));
    CHECK(ctx().yhat_member(G.mult(x, y)));
    CHECK(ctx().yhat_member(G.invert(x)));
  }
  for (int t = 0; t < 1500; ++t) {
    GElement g = t % 3 == 0 ? G.mult(random_yhat(rng), random_g(rng, 1, 2)) : random_g(rng, 1 + t % 3, 4);
    CHECK(ctx().yhat_member(g) == ctx().commutes_with_z(g));
  }
}

TEST_CASE("persistence witnesses", "[tower]") {
  auto r2 = persistence_witness(ctx(), 2);
  REQUIRE(r2.size() == 4);
  CHECK(ctx().D().print(r2[0].base) == "(L (L A^2 b^2 a^2))");
  CHECK(r2[0].exponent == 2);
  auto r3 = persistence_witness(ctx(), 3);
  CHECK(ctx().D().print(r3[0].base) == "(L (L A^3 b^2 a^3))");
  CHECK(r3[0].exponent == 6);
  CHECK(ctx().D().print(r3[3].base) == "(R (R A^3 b^2 a^3))");
  for (std::size_t q = 1; q <= 4; ++q) {
    for (auto const& row : persistence_witness(ctx(), q)) {
      CHECK(row.verified);
    }
  }
  CHECK(ctx().D().equal(persistence_witness(ctx(), 1)[1].base, ctx().promislow_gens(1)[1]));
  TowerContext geo(MultiplicativeSeq::geometric(1, 3));
  CHECK_THROWS_AS(persistence_witness(geo, 2), DomainError);
  CHECK_THROWS_AS(persistence_witness(ctx(), 0), DomainError);
}

TEST_CASE("coset power checks", "[tower]") {
  Rng rng(55);
  std::vector<DElement> samples;
  for (int t = 0; t < 20; ++t) {
    samples.push_back(random_element(ctx().D(), rng, 1 + t % 3,
                                     [&](Rng& r) { return random_g(r, 1 + r() % 2, 3); }));
  }
  PermRep trivial{{0}, {0}};
  auto r1 = coset_power_suite(ctx(), trivial, 4, samples);
  CHECK(r1.ok());
  CHECK(r1.subgroups == 1);

  PermRep flip{{0, 1}, {1, 0}};
  {
    CosetCheckResult r;
    FiniteSubgroup S({identity_perm(2)});
    coset_power_check(ctx(), flip, S, 2, samples, r);
    CHECK(r.ok());
    CHECK(r.checks == samples.size() + 4);
  }

  for (int t = 0; t < 6; ++t) {
    std::size_t m = 3 + t % 4;
    auto g = from_generators({random_nontrivial_word(rng, 3), random_nontrivial_word(rng, 3)});
    g = extend_by_path(g, Word(Gen::a, Int(static_cast<unsigned long long>(m))));
    auto rep = completion(g).rep;
    auto r   = coset_power_suite(ctx(), rep, 4, samples);
    CHECK(r.ok());
    CHECK(r.subgroups >= 1);
  }
}

TEST_CASE("low-index subgroups match brute force", "[tower][property]") {
  Rng rng(56);
  for (int t = 0; t < 12; ++t) {
    std::size_t n = 2 + t % 3;
    Perm a(n), b(n);
    std::iota(a.begin(), a.end(), 0u);
    std::iota(b.begin(), b.end(), 0u);
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    FiniteGroup Q(PermRep{a, b});
    std::set<std::vector<Perm>> expected;
    for (auto const& s : two_generated_subgroups(Q)) {
      if (Q.order() / s.size() <= 4) {
        expected.insert(s);
      }
    }
    std::set<std::vector<Perm>> got;
    for (auto const& s : low_index_subgroups(Q, 4)) {
      CHECK(s.index * s.subgroup.order() == Q.order());
      got.insert(s.subgroup.elements());
    }
    CHECK(got == expected);
  }
  // S_3: itself, A_3 and three subgroups of order 2.
  FiniteGroup S3(PermRep{{1, 2, 0}, {1, 0, 2}});
  CHECK(low_index_subgroups(S3, 4).size() == 5);
}
