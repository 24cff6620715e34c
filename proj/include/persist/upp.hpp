#pragma once

// Unique products in A * B for finite subsets of a group given by an oracle,
// re-checkable failure certificates, and a seeded annealing search for
// unique-product-free sets.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace persist {

  using FactorPair = std::pair<std::size_t, std::size_t>;

  // Products of A x B grouped by value: classes[c] lists the pairs (indices
  // into A and B) with a common product, value[c] is that product.
  template <class O>
  struct ProductTable {
    std::vector<typename O::element_type> value;
    std::vector<std::vector<FactorPair>> classes;

    std::size_t total_pairs() const {
      std::size_t n = 0;
      for (auto const& c : classes) {
        n += c.size();
      }
      return n;
    }
  };

  template <class O>
  ProductTable<O> product_table(std::vector<typename O::element_type> const& A,
                                std::vector<typename O::element_type> const& B,
                                O const& group) {
    if (A.empty() || B.empty()) {
      throw DomainError("unique products need nonempty sets");
    }
    using E = typename O::element_type;
    std::vector<E> prod;
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (hash, index)
    prod.reserve(A.size() * B.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
      for (std::size_t j = 0; j < B.size(); ++j) {
        prod.push_back(group.mult(A[i], B[j]));
        order.emplace_back(group.hash(prod.back()), prod.size() - 1);
      }
    }
    std::sort(order.begin(), order.end());
    ProductTable<O> t;
    std::size_t nb = B.size();
    for (std::size_t lo = 0; lo < order.size();) {
      std::size_t hi = lo;
      while (hi < order.size() && order[hi].first == order[lo].first) {
        ++hi;
      }
      // Exact equality inside a hash run.
      std::size_t first_class = t.classes.size();
      for (std::size_t k = lo; k < hi; ++k) {
        std::size_t idx = order[k].second;
        bool placed     = false;
        for (std::size_t c = first_class; c < t.classes.size(); ++c) {
          if (group.equal(t.value[c], prod[idx])) {
            t.classes[c].emplace_back(idx / nb, idx % nb);
            placed = true;
            break;
          }
        }
        if (!placed) {
          t.value.push_back(prod[idx]);
          t.classes.push_back({{idx / nb, idx % nb}});
        }
      }
      lo = hi;
    }
    return t;
  }

  template <class O>
  std::vector<FactorPair> unique_products(std::vector<typename O::element_type> const& A,
                                          std::vector<typename O::element_type> const& B,
                                          O const& group) {
    auto t = product_table(A, B, group);
    std::vector<FactorPair> out;
    for (auto const& c : t.classes) {
      if (c.size() == 1) {
        out.push_back(c.front());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Removes duplicates (by the oracle's equality), keeping first occurrences.
  template <class O>
  std::vector<typename O::element_type> dedupe(std::vector<typename O::element_type> const& S,
                                               O const& group) {
    std::vector<typename O::element_type> out;
    for (auto const& x : S) {
      bool seen = false;
      for (auto const& y : out) {
        if (group.hash(x) == group.hash(y) && group.equal(x, y)) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        out.push_back(x);
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Certificates
  ////////////////////////////////////////////////////////////////////////

  struct UppCertificate {
    std::vector<std::string> set;
    bool failure = false;  // true: S*S has no unique product
    // failure: every product with its factor pairs; otherwise the witness.
    std::vector<std::pair<std::string, std::vector<FactorPair>>> products;
    std::optional<FactorPair> witness;

    nlohmann::json to_json() const {
      nlohmann::json j;
      j["schema"]  = 1;
      j["set"]     = set;
      j["failure"] = failure;
      if (failure) {
        nlohmann::json ps = nlohmann::json::array();
        for (auto const& [p, pairs] : products) {
          nlohmann::json pj = nlohmann::json::array();
          for (auto const& [a, b] : pairs) {
            pj.push_back({a, b});
          }
          ps.push_back({{"product", p}, {"pairs", pj}});
        }
        j["products"] = ps;
      } else if (witness) {
        j["witness"] = {witness->first, witness->second};
      }
      return j;
    }

    static UppCertificate from_json(nlohmann::json const& j) {
      try {
        UppCertificate c;
        if (j.at("schema").get<int>() != 1) {
          throw ParseError("unsupported certificate schema");
        }
        c.set     = j.at("set").get<std::vector<std::string>>();
        c.failure = j.at("failure").get<bool>();
        if (c.failure) {
          for (auto const& p : j.at("products")) {
            std::vector<FactorPair> pairs;
            for (auto const& ab : p.at("pairs")) {
              pairs.emplace_back(ab.at(0).get<std::size_t>(), ab.at(1).get<std::size_t>());
            }
            c.products.emplace_back(p.at("product").get<std::string>(), std::move(pairs));
          }
        } else if (j.contains("witness")) {
          c.witness = FactorPair(j["witness"].at(0).get<std::size_t>(),
                                 j["witness"].at(1).get<std::size_t>());
        }
        return c;
      } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("malformed UPP certificate: ") + e.what());
      }
    }
  };

  // Certificate for S * S: the full multiplicity table when no product is
  // unique, otherwise a witnessing unique pair.
  template <class O>
  UppCertificate upp_failure_certificate(std::vector<typename O::element_type> const& S,
                                         O const& group) {
    auto t = product_table(S, S, group);
    UppCertificate c;
    for (auto const& x : S) {
      c.set.push_back(group.print(x));
    }
    std::optional<FactorPair> unique;
    for (auto const& cl : t.classes) {
      if (cl.size() == 1 && (!unique || cl.front() < *unique)) {
        unique = cl.front();
      }
    }
    if (unique) {
      c.witness = unique;
      return c;
    }
    c.failure = true;
    for (std::size_t k = 0; k < t.classes.size(); ++k) {
      auto pairs = t.classes[k];
      std::sort(pairs.begin(), pairs.end());
      c.products.emplace_back(group.print(t.value[k]), std::move(pairs));
    }
    std::sort(c.products.begin(), c.products.end(),
              [](auto const& x, auto const& y) { return x.second.front() < y.second.front(); });
    return c;
  }

  // Re-validation from the certificate's text alone: parse the set, check it
  // has no repeats, recompute every listed product, and check that the listed
  // pairs cover S x S exactly once with every multiplicity >= 2 (failure) or
  // that the witness pair's product is hit by no other pair.
  template <class O>
  bool verify_upp_certificate(UppCertificate const& c, O const& group, std::string* why = nullptr) {
    auto fail = [&](std::string msg) {
      if (why != nullptr) {
        *why = std::move(msg);
      }
      return false;
    };
    using E = typename O::element_type;
    std::vector<E> S;
    try {
      for (auto const& s : c.set) {
        S.push_back(group.parse(s));
      }
    } catch (std::exception const& e) {
      return fail(std::string("unparsable set element: ") + e.what());
    }
    std::size_t n = S.size();
    if (n == 0) {
      return fail("empty set");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (group.equal(S[i], S[j])) {
          return fail("set has a repeated element");
        }
      }
    }
    if (!c.failure) {
      if (!c.witness || c.witness->first >= n || c.witness->second >= n) {
        return fail("missing or out-of-range witness");
      }
      E p = group.mult(S[c.witness->first], S[c.witness->second]);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (FactorPair(i, j) != *c.witness && group.equal(group.mult(S[i], S[j]), p)) {
            return fail("witness product is not unique");
          }
        }
      }
      return true;
    }
    std::vector<char> covered(n * n, 0);
    for (auto const& [text, pairs] : c.products) {
      if (pairs.size() < 2) {
        return fail("product " + text + " has multiplicity " + std::to_string(pairs.size()));
      }
      E p;
      try {
        p = group.parse(text);
      } catch (std::exception const& e) {
        return fail(std::string("unparsable product: ") + e.what());
      }
      for (auto const& [i, j] : pairs) {
        if (i >= n || j >= n) {
          return fail("pair index out of range");
        }
        if (covered[i * n + j]) {
          return fail("pair listed twice");
        }
        covered[i * n + j] = 1;
        if (!group.equal(group.mult(S[i], S[j]), p)) {
          return fail("pair (" + std::to_string(i) + "," + std::to_string(j)
                      + ") does not multiply to " + text);
        }
      }
    }
    if (std::count(covered.begin(), covered.end(), 1) != static_cast<long>(n * n)) {
      return fail("pairs do not cover S x S");
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Search
  ////////////////////////////////////////////////////////////////////////

  struct SearchConfig {
    std::size_t size             = 14;
    std::size_t budget           = 1'000'000;  // objective evaluations, all restarts
    std::size_t restart_length   = 20'000;
    double initial_temperature   = 2.0;
    double cooling               = 0.9997;
    double min_temperature       = 0.05;
    unsigned long long seed      = 1;
    std::size_t jobs             = 1;
  };

  struct SearchResult {
    std::optional<std::vector<std::size_t>> found;  // indices into the pool
    std::size_t evaluations = 0;
    std::size_t restarts    = 0;
    std::size_t best_unique = 0;
  };

  namespace detail {

    template <class O>
    std::size_t count_unique(std::vector<typename O::element_type> const& pool,
                             std::vector<std::size_t> const& idx,
                             O const& group) {
      std::vector<typename O::element_type> S;
      S.reserve(idx.size());
      for (auto i : idx) {
        S.push_back(pool[i]);
      }
      auto t = product_table(S, S, group);
      std::size_t u = 0;
      for (auto const& c : t.classes) {
        u += c.size() == 1;
      }
      return u;
    }

    struct RestartOutcome {
      std::optional<std::vector<std::size_t>> found;
      std::size_t evaluations = 0;
      std::size_t best        = 0;
    };

    template <class O>
    RestartOutcome anneal(std::vector<typename O::element_type> const& pool,
                          O const& group,
                          SearchConfig const& cfg,
                          std::size_t restart,
                          std::size_t max_evals) {
      RestartOutcome out;
      std::seed_seq ss{cfg.seed, static_cast<unsigned long long>(restart)};
      std::mt19937_64 rng(ss);
      std::vector<std::size_t> all(pool.size());
      for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
      }
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<std::size_t> cur(all.begin(), all.begin() + static_cast<long>(cfg.size));
      std::vector<char> in(pool.size(), 0);
      for (auto i : cur) {
        in[i] = 1;
      }
      std::size_t score = count_unique(pool, cur, group);
      out.evaluations   = 1;
      out.best          = score;
      double T          = cfg.initial_temperature;
      std::uniform_int_distribution<std::size_t> pos(0, cfg.size - 1), pick(0, pool.size() - 1);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      while (score > 0 && out.evaluations < max_evals) {
        std::size_t p = pos(rng);
        std::size_t c = pick(rng);
        if (in[c]) {
          continue;
        }
        std::size_t old = cur[p];
        cur[p]          = c;
        std::size_t s   = count_unique(pool, cur, group);
        ++out.evaluations;
        double delta = static_cast<double>(s) - static_cast<double>(score);
        if (delta <= 0 || unit(rng) < std::exp(-delta / T)) {
          in[old] = 0;
          in[c]   = 1;
          score   = s;
          out.best = std::min(out.best, score);
        } else {
          cur[p] = old;
        }
        T = std::max(cfg.min_temperature, T * cfg.cooling);
      }
      if (score == 0) {
        std::sort(cur.begin(), cur.end());
        out.found = cur;
      }
      return out;
    }

  }  // namespace detail

  // Simulated annealing over size-element subsets of pool minimizing the
  // number of unique products in S * S.  Restart r is seeded by (seed, r), so
  // the result depends only on the config; with several jobs the lowest
  // successful restart wins.  "Not found" is not evidence of the UPP.
  template <class O>
  SearchResult search_failure_set(std::vector<typename O::element_type> const& pool,
                                  O const& group,
                                  SearchConfig const& cfg) {
    if (cfg.size == 0 || cfg.size > pool.size()) {
      throw DomainError("search size must be between 1 and the pool size");
    }
    SearchResult res;
    std::size_t restarts = (cfg.budget + cfg.restart_length - 1) / cfg.restart_length;
    std::size_t jobs     = std::max<std::size_t>(1, cfg.jobs);
    std::vector<detail::RestartOutcome> outcomes(restarts);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_success{restarts};
    auto worker = [&] {
      for (;;) {
        std::size_t r = next.fetch_add(1);
        if (r >= restarts || r > first_success.load()) {
          return;
        }
        std::size_t evals = std::min(cfg.restart_length, cfg.budget - r * cfg.restart_length);
        outcomes[r]       = detail::anneal(pool, group, cfg, r, evals);
        if (outcomes[r].found) {
          std::size_t cur = first_success.load();
          while (r < cur && !first_success.compare_exchange_weak(cur, r)) {
          }
        }
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (std::size_t j = 0; j < jobs; ++j) {
        threads.emplace_back(worker);
      }
      for (auto& t : threads) {
        t.join();
      }
    }
    std::size_t last = std::min(first_success.load(), restarts == 0 ? 0 : restarts - 1);
    res.best_unique  = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r <= last && r < restarts; ++r) {
      res.evaluations += outcomes[r].evaluations;
      res.best_unique = std::min(res.best_unique, outcomes[r].best);
      ++res.restarts;
    }
    if (first_success.load() < restarts) {
      res.found = outcomes[first_success.load()].found;
    }
    return res;
  }

}  // namespace persist
