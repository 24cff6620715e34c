#include "catch_amalgamated.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "persist/stallings.hpp"
#include "support.hpp"

using namespace persist;
using persist::test::random_word;

namespace {
  Word w(char const* s) {
    return parse_word(s);
  }

  Perm random_perm(std::mt19937_64& rng, std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0u);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  }

  // Schreier generators of the stabilizer of 0, read off a BFS tree of the
  // orbit.  Independent of folding.
  std::vector<Word> stabilizer_generators(PermRep const& rep) {
    std::size_t n = rep.degree();
    std::vector<std::optional<Word>> path(n);
    path[0] = Word();
    std::vector<std::uint32_t> queue{0};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::uint32_t v = queue[i];
      for (Gen x : {Gen::a, Gen::b}) {
        std::uint32_t t = rep.gen(x)[v];
        if (!path[t]) {
          path[t] = *path[v] * Word(x, 1);
          queue.push_back(t);
        }
      }
    }
    std::vector<Word> gens;
    for (auto v : queue) {
      for (Gen x : {Gen::a, Gen::b}) {
        Word s = *path[v] * Word(x, 1) * path[rep.gen(x)[v]]->inverse();
        if (!s.is_identity()) {
          gens.push_back(s);
        }
      }
    }
    return gens;
  }

  Word evaluate(std::vector<Word> const& basis, BasisWord const& e) {
    Word r;
    for (auto const& [i, k] : e) {
      r *= basis[i].pow(k);
    }
    return r;
  }
}  // namespace

TEST_CASE("from_generators examples", "[stallings]") {
  auto g1 = from_generators({w("a")});
  CHECK(g1.num_vertices() == 1);
  CHECK(g1.num_edges() == 1);
  CHECK(g1.target(g1.base(), Gen::a) == g1.base());

  auto g2 = from_generators({w("b^2")});
  CHECK(g2.num_vertices() == 2);
  CHECK(g2.num_edges() == 2);
  CHECK(g2.target(g2.target(g2.base(), Gen::b), Gen::b) == g2.base());

  auto g3 = from_generators({w("A b^2 a")});
  CHECK(g3.num_vertices() == 3);
  CHECK(g3.num_edges() == 3);
  Vertex end = g3.source(g3.base(), Gen::a);
  REQUIRE(end != no_vertex);
  CHECK(g3.degree(g3.base()) == 1);
  CHECK(g3.target(g3.target(end, Gen::b), Gen::b) == end);
  CHECK(g3.is_core());

  auto trivial = from_generators(std::span<Word const>{});
  CHECK(trivial.num_vertices() == 1);
  CHECK(trivial.num_edges() == 0);
}

TEST_CASE("membership and express examples", "[stallings]") {
  auto g = from_generators({w("b^2")});
  CHECK(membership(g, w("b^4")));
  auto e = express(g, w("b^4"));
  REQUIRE(e);
  REQUIRE(e->size() == 1);
  CHECK(e->front().first == 0);
  CHECK(e->front().second == 2);
  CHECK_FALSE(membership(g, w("b")));
  CHECK_FALSE(express(g, w("b")));
  CHECK(membership(from_generators({w("a"), w("b^2")}), w("a b^2 A")));
}

TEST_CASE("basis examples", "[stallings]") {
  auto ba = basis(from_generators({w("a")}));
  REQUIRE(ba.size() == 1);
  CHECK(ba[0] == w("a"));
  CHECK(basis(from_generators(std::span<Word const>{})).empty());

  std::vector<Word> gens{w("a^2"), w("a b")};
  auto g  = from_generators(gens);
  auto bs = basis(g);
  CHECK(bs.size() == 2);
  CHECK(bs.size() == g.rank());
  auto back = from_generators(bs);
  for (auto const& x : gens) {
    CHECK(membership(back, x));
  }
  for (auto const& x : bs) {
    CHECK(membership(g, x));
  }
}

TEST_CASE("pullback examples", "[stallings]") {
  auto i1 = pullback(from_generators({w("a")}), from_generators({w("b")}));
  CHECK(i1.num_edges() == 0);
  auto i2 = pullback(from_generators({w("a^2")}), from_generators({w("a^3")}));
  CHECK(canonicalize(i2) == canonicalize(from_generators({w("a^6")})));
  auto i3 = pullback(from_generators({w("a"), w("b^2")}), from_generators({w("a"), w("b^3")}));
  CHECK(membership(i3, w("a")));
  CHECK(membership(i3, w("b^6")));
  CHECK_FALSE(membership(i3, w("b^2")));
}

TEST_CASE("completion examples", "[stallings]") {
  auto c1 = completion(from_generators({w("a")}));
  CHECK(c1.rep.degree() == 1);
  CHECK(is_identity(c1.rep.a));
  CHECK(is_identity(c1.rep.b));

  auto c2 = completion(from_generators({w("b^2")}));
  CHECK(c2.rep.degree() == 2);
  CHECK(c2.rep.b == Perm{1, 0});
  CHECK(c2.rep.act(0, w("b^2")) == 0);
  CHECK(c2.rep.act(0, w("b")) != 0);
  CHECK(c2.cover.is_cover());
}

TEST_CASE("double_cover examples", "[stallings]") {
  for (std::size_t n0 : {1u, 2u, 5u}) {
    auto g = from_generators({Word(Gen::b, Int(n0))});
    std::vector<std::uint8_t> chi{1};
    auto h = double_cover(g, chi);
    CHECK(h.num_vertices() == 2 * n0);
    CHECK(canonicalize(h) == canonicalize(from_generators({Word(Gen::b, Int(2 * n0))})));
  }
  auto g = from_generators({w("a"), w("b")});
  auto bs = basis(g);
  REQUIRE(bs.size() == 2);
  std::vector<std::uint8_t> chi(2);
  for (std::size_t i = 0; i < 2; ++i) {
    chi[i] = bs[i] == w("a") ? 1 : 0;
  }
  auto h = double_cover(g, chi);
  CHECK(h.num_vertices() == 2);
  CHECK_FALSE(membership(h, w("a")));
  CHECK(membership(h, w("b")));
  CHECK(membership(h, w("a^2")));
  std::vector<std::uint8_t> zero(2, 0);
  CHECK_THROWS_AS(double_cover(g, zero), DomainError);
}

TEST_CASE("membership matches a permutation stabilizer oracle", "[stallings][property]") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    std::size_t n = 1 + t % 9;
    PermRep rep{random_perm(rng, n), random_perm(rng, n)};
    auto gens = stabilizer_generators(rep);
    auto g    = from_generators(gens);
    CHECK(g.is_core());
    for (int s = 0; s < 40; ++s) {
      Word x = random_word(rng, 1 + s % 7);
      CHECK(membership(g, x) == (rep.act(0, x) == 0));
    }
  }
}

TEST_CASE("products of generators are members and express back", "[stallings][property]") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    std::vector<Word> gens;
    for (int k = 0; k < 1 + t % 3; ++k) {
      gens.push_back(random_word(rng, 1 + rng() % 4));
    }
    auto g    = from_generators(gens);
    auto bs   = basis(g);
    Word prod;
    for (int s = 0; s < 6; ++s) {
      auto const& x = gens[rng() % gens.size()];
      prod *= (rng() % 2 == 0) ? x : x.inverse();
      REQUIRE(membership(g, prod));
      auto e = express(g, prod);
      REQUIRE(e);
      CHECK(evaluate(bs, *e) == prod);
    }
    Word y = random_word(rng, 5);
    CHECK(membership(g, y) == express(g, y).has_value());
  }
}

TEST_CASE("pullback is intersection", "[stallings][property]") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + t % 5;
    PermRep r1{random_perm(rng, n), random_perm(rng, n)};
    PermRep r2{random_perm(rng, n), random_perm(rng, n)};
    auto g1 = from_generators(stabilizer_generators(r1));
    auto g2 = from_generators(stabilizer_generators(r2));
    auto p  = pullback(g1, g2);
    for (int s = 0; s < 40; ++s) {
      Word x = random_word(rng, 1 + s % 8);
      CHECK(membership(p, x) == (membership(g1, x) && membership(g2, x)));
    }
  }
}

TEST_CASE("completion fixes the base on subgroup elements", "[stallings][property]") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 200; ++t) {
    std::vector<Word> gens{random_word(rng, 3), random_word(rng, 4)};
    auto g = from_generators(gens);
    auto c = completion(g);
    CHECK(c.cover.is_cover());
    CHECK(c.rep.valid());
    for (auto const& x : basis(g)) {
      CHECK(c.rep.act(0, x) == 0);
      CHECK(c.rep.image(x)[0] == 0);
    }
    Word y = random_word(rng, 6);
    if (!membership(g, y)) {
      auto sep = completion(extend_by_path(g, y));
      CHECK(sep.rep.act(0, y) != 0);
    }
  }
}

TEST_CASE("double covers have index two", "[stallings][property]") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 100; ++t) {
    auto g  = from_generators({random_word(rng, 3), random_word(rng, 3), random_word(rng, 2)});
    auto bs = basis(g);
    if (bs.empty()) {
      continue;
    }
    std::vector<std::uint8_t> chi(bs.size());
    for (auto& c : chi) {
      c = rng() % 2;
    }
    chi[rng() % chi.size()] = 1;
    auto h = double_cover(g, chi);
    CHECK(h.num_vertices() == 2 * g.num_vertices());
    for (std::size_t i = 0; i < bs.size(); ++i) {
      CHECK(membership(h, bs[i]) == (chi[i] == 0));
      CHECK(membership(h, bs[i].pow(2)));
    }
  }
}

TEST_CASE("graph text round trip", "[stallings][io]") {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 50; ++t) {
    auto g = from_generators({random_word(rng, 4), random_word(rng, 4)});
    CHECK(parse_graph(to_text(g)) == g);
  }
  CHECK(to_text(from_generators({w("b^2")})) == "vertices 2 base 0\n0 b 1\n1 b 0\n");
  CHECK_THROWS_AS(parse_graph("vertices 2 base 5\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("vertices 2 base 0\n0 c 1\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("vertices 2 base 0\n0 a 1\n0 a 0\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("nodes 2\n"), ParseError);
}
