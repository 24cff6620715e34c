#include "catch_amalgamated.hpp"

#include "persist/amalgam.hpp"
#include "persist/sampling.hpp"
#include "persist/tower.hpp"
#include "support.hpp"

using namespace persist;

namespace {
  KleinEngine const& K() {
    static KleinEngine const k = klein_engine();
    return k;
  }

  KleinElement kl(char const* s) {
    return K().parse(s);
  }

  Int small_int(Rng& rng, long long bound = 5) {
    return Int(std::uniform_int_distribution<long long>(-bound, bound)(rng));
  }

  std::vector<KleinEngine::syllable> random_raw(Rng& rng, std::size_t n) {
    std::vector<KleinEngine::syllable> raw;
    for (std::size_t i = 0; i < n; ++i) {
      raw.push_back({rng() % 2 == 0 ? Side::L : Side::R, small_int(rng)});
    }
    return raw;
  }

  using FDouble = Amalgam<SubgroupDouble<FreeGroup>>;

  FDouble free_double(std::vector<Word> const& sub) {
    auto g = std::make_shared<CoreGraph const>(from_generators(sub));
    return make_double(FreeGroup{}, [g](Word const& w) { return membership(*g, w); });
  }
}  // namespace

TEST_CASE("Klein bottle reduction examples", "[amalgam]") {
  CHECK(K().print(K().reduce({{Side::L, Int(2)}, {Side::R, Int(-1)}})) == "(R u)");
  CHECK(K().reduce({{Side::L, Int(1)}, {Side::L, Int(-1)}}).empty());
  auto x = K().reduce({{Side::L, Int(1)}, {Side::R, Int(1)}, {Side::L, Int(1)}});
  CHECK(x.syllable_length() == 3);
  CHECK(K().print(x) == "(L u)(R u)(L u)");
  CHECK(K().print(K().make(Side::R, Int(4))) == "(L u^4)");
}

TEST_CASE("Klein bottle group operations", "[amalgam]") {
  auto tk   = klein_toolkit();
  auto ell  = tk.ell();
  CHECK(K().equal(ell, kl("(L u)(R U)")));
  CHECK(ell.syllable_length() == 2);
  CHECK(K().is_identity(K().mult(ell, K().invert(ell))));
  CHECK(K().equal(kl("(L u^2)"), kl("(R u^2)")));
  CHECK_FALSE(K().equal(kl("(L u)"), kl("(R u)")));
  CHECK(K().pow(ell, 3).syllable_length() == 6);
}

TEST_CASE("translation decomposition examples", "[amalgam]") {
  auto tk = klein_toolkit();
  auto d1 = tk.decompose(tk.ell());
  CHECK(d1.n == 0);
  CHECK(d1.q == 1);
  auto d2 = tk.decompose(kl("(L u^2)"));
  CHECK(d2.n == 2);
  CHECK(d2.q == 0);
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    Int n = 2 * small_int(rng, 50);
    Int q = small_int(rng, 6);
    auto d = tk.decompose(tk.compose(n, q));
    CHECK(d.n == n);
    CHECK(d.q == q);
  }
  CHECK_THROWS_AS(tk.decompose(kl("(L u)")), DomainError);
  CHECK(tk.centralizer_member(tk.ell()));
  CHECK_FALSE(tk.centralizer_member(kl("(L u)")));
  CHECK_THROWS_AS(TranslationToolkit<KleinOracle>(K(), [](Int const&) { return true; }, Int(2)),
                  DomainError);
}

TEST_CASE("reduction is confluent", "[amalgam][property]") {
  Rng rng(42);
  for (int t = 0; t < 2000; ++t) {
    auto raw = random_raw(rng, 1 + t % 10);
    auto l   = K().reduce(raw);
    auto r   = K().reduce_from_right(raw);
    CHECK(K().equal(l, r));
    CHECK(l.syllable_length() <= raw.size());
    for (std::size_t i = 0; i + 1 < l.syllable_length(); ++i) {
      CHECK(l[i].side != l[i + 1].side);
    }
    if (l.syllable_length() > 1) {
      for (auto const& s : l.syllables()) {
        CHECK_FALSE(K().oracle().sub_member(s.side, s.elt));
      }
    }
  }
}

TEST_CASE("group axioms in the Klein bottle", "[amalgam][property]") {
  Rng rng(43);
  for (int t = 0; t < 500; ++t) {
    auto x = K().reduce(random_raw(rng, 5));
    auto y = K().reduce(random_raw(rng, 5));
    auto z = K().reduce(random_raw(rng, 5));
    CHECK(K().equal(K().mult(K().mult(x, y), z), K().mult(x, K().mult(y, z))));
    CHECK(K().is_identity(K().mult(x, K().invert(x))));
    CHECK(K().equal(K().parse(K().print(x)), x));
    CHECK(K().equal(K().from_json(K().to_json(x)), x));
  }
}

TEST_CASE("ell commutes with N and meets it trivially", "[amalgam][property]") {
  auto tk = klein_toolkit();
  Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    auto n = K().make(Side::L, 2 * small_int(rng, 40));
    CHECK(K().equal(K().mult(tk.ell(), n), K().mult(n, tk.ell())));
  }
  for (int q = 1; q <= 8; ++q) {
    auto p = K().pow(tk.ell(), q);
    CHECK_FALSE(p.syllable_length() == 1);
    CHECK(p.syllable_length() == static_cast<std::size_t>(2 * q));
  }
}

TEST_CASE("translation parity is a homomorphism", "[amalgam][property]") {
  auto tk = klein_toolkit();
  Rng rng(45);
  for (int t = 0; t < 1000; ++t) {
    auto x = K().reduce(random_raw(rng, 4));
    auto y = K().reduce(random_raw(rng, 4));
    bool tx = tk.is_translation(x);
    bool ty = tk.is_translation(y);
    CHECK(tk.is_translation(K().mult(x, y)) == (tx == ty));
    CHECK(tk.centralizer_member(x) == K().equal(K().mult(x, tk.ell()), K().mult(tk.ell(), x)));
  }
}

TEST_CASE("non-canonical gluing", "[amalgam]") {
  // Z *_{2Z} Z glued by x -> -x.
  KleinEngine twisted(KleinOracle(
      IntegerGroup{}, [](Int const& x) { return (x & 1) == 0; },
      [](Int const& x) { return Int(-x); }, [](Int const& x) { return Int(-x); }));
  CHECK(twisted.equal(twisted.make(Side::L, Int(2)), twisted.make(Side::R, Int(-2))));
  CHECK_FALSE(twisted.equal(twisted.make(Side::L, Int(2)), twisted.make(Side::R, Int(2))));
  CHECK(twisted.print(twisted.reduce({{Side::R, Int(1)}, {Side::L, Int(2)}})) == "(R U)");
  Rng rng(46);
  for (int t = 0; t < 300; ++t) {
    auto raw = random_raw(rng, 1 + t % 8);
    CHECK(twisted.equal(twisted.reduce(raw), twisted.reduce_from_right(raw)));
  }
}

TEST_CASE("nested doubles", "[amalgam]") {
  // Double of the Klein bottle along its translation subgroup.
  auto tk = klein_toolkit();
  using Outer = Amalgam<SubgroupDouble<KleinEngine>>;
  Outer D(SubgroupDouble<KleinEngine>(K(), [tk](KleinElement const& x) { return tk.is_translation(x); }));
  auto refl = kl("(L u)");
  auto x    = D.reduce({{Side::L, refl}, {Side::R, refl}});
  CHECK(x.syllable_length() == 2);
  CHECK(D.print(x) == "(L (L u))(R (L u))");
  CHECK(D.equal(D.parse(D.print(x)), x));
  CHECK(D.make(Side::R, tk.ell()).syllable_length() == 1);
  CHECK(D.equal(D.make(Side::R, tk.ell()), D.make(Side::L, tk.ell())));
  CHECK(D.is_identity(D.reduce({{Side::L, refl}, {Side::R, refl}, {Side::R, K().invert(refl)},
                                {Side::L, K().invert(refl)}})));
  Rng rng(47);
  for (int t = 0; t < 200; ++t) {
    std::vector<Outer::syllable> raw;
    for (int k = 0; k < 1 + t % 5; ++k) {
      raw.push_back({rng() % 2 == 0 ? Side::L : Side::R, K().reduce(random_raw(rng, 3))});
    }
    CHECK(D.equal(D.reduce(raw), D.reduce_from_right(raw)));
    CHECK(D.equal(D.from_json(D.to_json(D.reduce(raw))), D.reduce(raw)));
  }
}

TEST_CASE("grammar errors", "[amalgam][io]") {
  for (char const* bad : {"(X u)", "(L u", "L u", "()", "(L u)junk", "1 (L u)"}) {
    INFO(bad);
    CHECK_THROWS_AS(K().parse(bad), ParseError);
  }
  CHECK(K().parse(" 1 ").empty());
  CHECK_THROWS_AS(K().from_json(nlohmann::json::object()), ParseError);
  CHECK_THROWS_AS(K().from_json(nlohmann::json::parse(R"([{"side":"M","elt":"u"}])")), ParseError);
  auto G = free_double({Word(Gen::b, 2)});
  auto g = G.parse("(L A^2 b^4 a^2)(R a)");
  CHECK(G.print(g) == "(L A^2 b^4 a^2)(R a)");
  CHECK(G.to_json(g).dump() == R"([{"elt":"A^2 b^4 a^2","side":"L"},{"elt":"a","side":"R"}])");
}

TEST_CASE("injection of doubles", "[amalgam]") {
  Rng rng(48);
  auto outer = free_double({Word(Gen::a, 1)});
  auto in_D  = [](Word const& w) { return w.num_syllables() <= 1 && w.length(Gen::b) == 0; };
  std::function<Word(Rng&)> sample_A = [](Rng& g) { return random_nontrivial_word(g, 4); };

  // inner = outer
  auto same = injection_suite<SubgroupDouble<FreeGroup>, Rng>(
      outer, sample_A, [&](Word const& w) { return in_D(w); }, 200, 4, rng);
  CHECK(same.ok());
  CHECK(same.samples == 200);

  // A = <a, b^2>, C = <a^2> strictly inside A cap D = <a>.
  auto A = std::make_shared<CoreGraph const>(from_generators({Word(Gen::a, 1), Word(Gen::b, 2)}));
  std::function<Word(Rng&)> sample_sub = [](Rng& g) {
    Word w;
    std::size_t n = 1 + g() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      w *= (g() % 2 == 0) ? Word(Gen::a, Int(static_cast<long long>(g() % 5) - 2))
                          : Word(Gen::b, Int(2 * (static_cast<long long>(g() % 3) - 1)));
    }
    return w;
  };
  auto broken = injection_suite<SubgroupDouble<FreeGroup>, Rng>(
      outer, sample_sub,
      [](Word const& w) { return w.num_syllables() <= 1 && w.length(Gen::b) == 0 && w.length() % 2 == 0; },
      200, 4, rng);
  CHECK(broken.hypothesis_failures > 0);
  CHECK(broken.violations > 0);
  CHECK_FALSE(broken.ok());
  for (int t = 0; t < 20; ++t) {
    CHECK(membership(*A, sample_sub(rng)));
  }
}
