#include "catch_amalgamated.hpp"

#include <algorithm>
#include <set>

#include "persist/affine.hpp"
#include "persist/groups.hpp"
#include "persist/sampling.hpp"
#include "persist/upp.hpp"

using namespace persist;

namespace {
  std::vector<Int> ints(std::initializer_list<long long> xs) {
    std::vector<Int> out;
    for (auto x : xs) {
      out.emplace_back(x);
    }
    return out;
  }

  std::vector<Int> random_int_set(Rng& rng, std::size_t n, long long bound) {
    std::set<long long> s;
    while (s.size() < n) {
      s.insert(static_cast<long long>(rng() % (2 * bound + 1)) - bound);
    }
    std::vector<Int> out;
    for (auto x : s) {
      out.emplace_back(x);
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
  }

  std::vector<AffineElement> model_pool(std::size_t radius) {
    auto m = promislow_model();
    return ball({m.x, m.y}, radius);
  }
}  // namespace

TEST_CASE("unique product examples", "[upp]") {
  IntegerGroup Z;
  auto u1 = unique_products(ints({0}), ints({0, 1}), Z);
  CHECK(u1 == std::vector<FactorPair>{{0, 0}, {0, 1}});
  CyclicGroup Z2(2);
  CHECK(unique_products(ints({0, 1}), ints({0, 1}), Z2).empty());
  auto u3 = unique_products(ints({0, 1, 2}), ints({0, 1, 2}), Z);
  CHECK(u3 == std::vector<FactorPair>{{0, 0}, {2, 2}});
  CHECK_THROWS_AS(unique_products(std::vector<Int>{}, ints({1}), Z), DomainError);
  CHECK(dedupe(ints({1, 3, 1, 5, 3}), Z) == ints({1, 3, 5}));
  CHECK(dedupe(ints({1, 3, 4}), CyclicGroup(3)).size() == 2);
}

TEST_CASE("failure certificate examples", "[upp]") {
  CyclicGroup Z2(2);
  auto c = upp_failure_certificate(ints({0, 1}), Z2);
  CHECK(c.failure);
  REQUIRE(c.products.size() == 2);
  for (auto const& p : c.products) {
    CHECK(p.second.size() == 2);
  }
  CHECK(verify_upp_certificate(c, Z2));

  IntegerGroup Z;
  auto w = upp_failure_certificate(ints({4, -2, 9, 1}), Z);
  CHECK_FALSE(w.failure);
  REQUIRE(w.witness);
  auto u = unique_products(ints({4, -2, 9, 1}), ints({4, -2, 9, 1}), Z);
  CHECK(std::find(u.begin(), u.end(), *w.witness) != u.end());
  CHECK(std::find(u.begin(), u.end(), FactorPair{2, 2}) != u.end());
  CHECK(verify_upp_certificate(w, Z));
}

TEST_CASE("product tables conserve pairs", "[upp][property]") {
  IntegerGroup Z;
  Rng rng(71);
  for (int t = 0; t < 200; ++t) {
    auto A  = random_int_set(rng, 1 + rng() % 20, 15);
    auto B  = random_int_set(rng, 1 + rng() % 20, 15);
    auto tb = product_table(A, B, Z);
    CHECK(tb.total_pairs() == A.size() * B.size());
    std::set<FactorPair> seen;
    for (std::size_t c = 0; c < tb.classes.size(); ++c) {
      for (auto const& p : tb.classes[c]) {
        CHECK(seen.insert(p).second);
        CHECK(A[p.first] + B[p.second] == tb.value[c]);
      }
    }
  }
}

TEST_CASE("left translation permutes unique products", "[upp][property]") {
  AffineGroup G;
  auto pool = model_pool(3);
  Rng rng(72);
  for (int t = 0; t < 100; ++t) {
    std::vector<AffineElement> A, B;
    for (int k = 0; k < 8; ++k) {
      A.push_back(pool[rng() % pool.size()]);
      B.push_back(pool[rng() % pool.size()]);
    }
    A = dedupe(A, G);
    B = dedupe(B, G);
    auto g = pool[rng() % pool.size()];
    std::vector<AffineElement> gA;
    for (auto const& a : A) {
      gA.push_back(affine_mult(g, a));
    }
    CHECK(unique_products(gA, B, G) == unique_products(A, B, G));
  }
}

TEST_CASE("ordered groups always have unique products", "[upp][property]") {
  IntegerGroup Z;
  Rng rng(73);
  for (int t = 0; t < 200; ++t) {
    auto A = random_int_set(rng, 1 + rng() % 50, 60);
    auto B = random_int_set(rng, 1 + rng() % 50, 60);
    CHECK_FALSE(unique_products(A, B, Z).empty());
  }
  AffineGroup G;
  for (int t = 0; t < 100; ++t) {
    std::vector<AffineElement> A, B;
    for (std::size_t k = 0; k < 1 + rng() % 30; ++k) {
      AffineElement x, y;
      for (std::size_t i = 0; i < 3; ++i) {
        x.twice[i] = 2 * (static_cast<long long>(rng() % 7) - 3);
        y.twice[i] = 2 * (static_cast<long long>(rng() % 7) - 3);
      }
      A.push_back(x);
      B.push_back(y);
    }
    CHECK_FALSE(unique_products(dedupe(A, G), dedupe(B, G), G).empty());
  }
}

TEST_CASE("search in ordered and finite groups", "[upp]") {
  IntegerGroup Z;
  std::vector<Int> pool;
  for (long long x = -6; x <= 6; ++x) {
    pool.emplace_back(x);
  }
  SearchConfig cfg;
  cfg.size   = 5;
  cfg.budget = 5000;
  auto r     = search_failure_set(pool, Z, cfg);
  CHECK_FALSE(r.found);
  CHECK(r.evaluations <= cfg.budget + cfg.restart_length);
  CHECK(r.best_unique >= 1);

  CyclicGroup Z2(2);
  cfg.size   = 2;
  auto f     = search_failure_set(ints({0, 1}), Z2, cfg);
  REQUIRE(f.found);
  CHECK(f.found->size() == 2);
  CHECK_THROWS_AS(search_failure_set(ints({0, 1}), Z2, SearchConfig{}), DomainError);
}

TEST_CASE("failure set in the crystallographic model", "[upp]") {
  AffineGroup G;
  auto pool = model_pool(3);
  SearchConfig cfg;
  cfg.seed = 1;
  auto r   = search_failure_set(pool, G, cfg);
  REQUIRE(r.found);
  REQUIRE(r.found->size() == 14);
  std::vector<AffineElement> S;
  for (auto i : *r.found) {
    S.push_back(pool[i]);
  }
  CHECK(unique_products(S, S, G).empty());
  auto c = upp_failure_certificate(S, G);
  REQUIRE(c.failure);
  std::size_t covered = 0;
  for (auto const& p : c.products) {
    CHECK(p.second.size() >= 2);
    covered += p.second.size();
  }
  CHECK(covered == 196);
  std::string why;
  CHECK(verify_upp_certificate(c, G, &why));
  auto back = UppCertificate::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(verify_upp_certificate(back, G));

  // Same seed, same answer regardless of thread count.
  cfg.jobs = 2;
  auto r2  = search_failure_set(pool, G, cfg);
  REQUIRE(r2.found);
  CHECK(*r2.found == *r.found);

  SECTION("tampering is detected") {
    auto t1 = c;
    t1.products[0].second.pop_back();
    CHECK_FALSE(verify_upp_certificate(t1, G, &why));
    auto t2 = c;
    t2.set[0] = to_string(affine_mult(S[0], S[0]));
    CHECK_FALSE(verify_upp_certificate(t2, G, &why));
    auto t3 = c;
    std::swap(t3.products[0].first, t3.products[1].first);
    CHECK_FALSE(verify_upp_certificate(t3, G, &why));
    auto t4 = c;
    t4.set[1] = t4.set[0];
    CHECK_FALSE(verify_upp_certificate(t4, G, &why));
    CHECK(why == "set has a repeated element");
  }
}

TEST_CASE("certificate JSON", "[upp][io]") {
  CyclicGroup Z2(2);
  auto c = upp_failure_certificate(ints({0, 1}), Z2);
  auto j = c.to_json();
  CHECK(j["schema"] == 1);
  CHECK(j.dump() == UppCertificate::from_json(j).to_json().dump());
  CHECK_THROWS_AS(UppCertificate::from_json(nlohmann::json::parse(R"({"set":[]})")), ParseError);
  CHECK_THROWS_AS(UppCertificate::from_json(nlohmann::json::parse(R"({"schema":2,"set":[],"failure":false})")),
                  ParseError);
  CHECK_THROWS_AS(
      UppCertificate::from_json(nlohmann::json::parse(R"({"schema":1,"set":["0"],"failure":true,"products":[{"pairs":[[0]]}]})")),
      ParseError);
}
