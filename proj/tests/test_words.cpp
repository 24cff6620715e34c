#include "catch_amalgamated.hpp"

#include "persist/words.hpp"
#include "support.hpp"

using namespace persist;
using persist::test::letters;
using persist::test::random_raw;
using persist::test::random_word;

namespace {
  Word w(char const* s) {
    return parse_word(s);
  }
}  // namespace

TEST_CASE("reduce examples", "[words]") {
  CHECK(Word::reduce({{Gen::a, 1}, {Gen::b, 1}, {Gen::b, -1}, {Gen::a, 1}}) == w("a^2"));
  CHECK(Word::reduce({}).is_identity());
  Word fixed = Word::reduce({{Gen::a, -2}, {Gen::b, 4}, {Gen::a, 2}});
  CHECK(fixed.num_syllables() == 3);
  CHECK(to_string(fixed) == "A^2 b^4 a^2");
}

TEST_CASE("group operation examples", "[words]") {
  CHECK(w("a b") * w("B a") == w("a^2"));
  CHECK(w("a B^2").inverse() == w("b^2 A"));
  CHECK(w("A b^2 a").pow(3) == w("A b^6 a"));
  CHECK(w("b").conjugate(w("a")) == w("A b a"));
}

TEST_CASE("reduction agrees with letter stack", "[words][property]") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    auto raw = random_raw(rng, 1 + t % 12);
    Word r   = Word::reduce(raw);
    CHECK(letters(r) == letters(raw));
    std::vector<Syllable> again(r.syllables().begin(), r.syllables().end());
    CHECK(Word::reduce(again) == r);
    for (std::size_t i = 0; i < r.num_syllables(); ++i) {
      CHECK(r.syllables()[i].exp != 0);
      if (i > 0) {
        CHECK(r.syllables()[i].gen != r.syllables()[i - 1].gen);
      }
    }
  }
}

TEST_CASE("group axioms on random triples", "[words][property]") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 1000; ++t) {
    Word u = random_word(rng, 6);
    Word v = random_word(rng, 6);
    Word x = random_word(rng, 6);
    CHECK((u * v) * x == u * (v * x));
    CHECK((u * u.inverse()).is_identity());
    CHECK((u.inverse() * u).is_identity());
    CHECK((u * v).length() <= u.length() + v.length());
    CHECK((u * v).inverse() == v.inverse() * u.inverse());
  }
}

TEST_CASE("powers of conjugates", "[words][property]") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 500; ++t) {
    Word u = random_word(rng, 5);
    Word g = random_word(rng, 4);
    int k  = static_cast<int>(rng() % 9) - 4;
    CHECK(u.conjugate(g).pow(k) == u.pow(k).conjugate(g));
    Word naive;
    for (int i = 0; i < (k < 0 ? -k : k); ++i) {
      naive *= (k < 0 ? u.inverse() : u);
    }
    CHECK(u.pow(k) == naive);
  }
}

TEST_CASE("large exponents stay compact", "[words]") {
  Int big = factorial(30) * 2;
  Word x  = Word(Gen::b, big).conjugate(word_a().pow(5));
  CHECK(x.num_syllables() == 3);
  CHECK(x.pow(1000).num_syllables() == 3);
  CHECK(x.pow(1000).syllables()[1].exp == big * 1000);
  CHECK(x.length(Gen::a) == 10);
  CHECK(parse_word(to_string(x)) == x);
}

TEST_CASE("grammar round trip", "[words][io]") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 500; ++t) {
    Word u = random_word(rng, 8, 50);
    CHECK(parse_word(to_string(u)) == u);
  }
  CHECK(to_string(Word()) == "1");
  CHECK(parse_word("1").is_identity());
  CHECK(parse_word("  a b  B A ").is_identity());
  CHECK(parse_word("a^-3 b^+2") == w("A^3 b^2"));
  CHECK(parse_word("A^-2") == w("a^2"));
  CHECK(parse_word("aab") == w("a^2 b"));
}

TEST_CASE("grammar rejects malformed input", "[words][io]") {
  for (char const* bad : {"c", "a^", "a^x", "^2", "a 1", "a^2^3", "b^-"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_word(bad), ParseError);
  }
}
