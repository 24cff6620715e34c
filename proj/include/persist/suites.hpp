#pragma once

// Named witness suites shared by the command-line tool and the acceptance
// runner.  Every suite is deterministic given its configuration and seed and
// returns a report with its checks, failures and a few concrete witnesses.

#include <chrono>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "affine.hpp"
#include "amalgam.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "finite.hpp"
#include "groups.hpp"
#include "presentation.hpp"
#include "rfwitness.hpp"
#include "sampling.hpp"
#include "sequence.hpp"
#include "stallings.hpp"
#include "tower.hpp"
#include "upp.hpp"
#include "words.hpp"

namespace persist {

  struct RunConfig {
    MultiplicativeSeq seq        = MultiplicativeSeq::factorial2();
    std::size_t max_i            = 4;
    std::size_t max_q            = 4;
    std::size_t ball_radius      = 3;
    std::size_t search_budget    = 1'000'000;
    unsigned long long seed      = 1;
    std::size_t jobs             = 1;

    // PERSIST_MAX_I, PERSIST_MAX_Q, PERSIST_BALL_RADIUS, PERSIST_SEARCH_BUDGET.
    void apply_environment() {
      auto read = [](char const* name, std::size_t& out) {
        if (char const* v = std::getenv(name)) {
          char* end          = nullptr;
          unsigned long long x = std::strtoull(v, &end, 10);
          if (end == v || *end != '\0' || x == 0) {
            throw ParseError(std::string(name) + " must be a positive integer");
          }
          out = static_cast<std::size_t>(x);
        }
      };
      read("PERSIST_MAX_I", max_i);
      read("PERSIST_MAX_Q", max_q);
      read("PERSIST_BALL_RADIUS", ball_radius);
      read("PERSIST_SEARCH_BUDGET", search_budget);
    }

    nlohmann::json to_json() const {
      return {{"seq", seq.to_json()},
              {"max_i", max_i},
              {"max_q", max_q},
              {"ball_radius", ball_radius},
              {"search_budget", search_budget},
              {"seed", seed}};
    }
  };

  struct SuiteReport {
    std::string name;
    std::string statement;  // the property exercised
    std::size_t checks   = 0;
    std::size_t failures = 0;
    std::vector<std::string> failure_examples;
    nlohmann::json details = nlohmann::json::object();
    double seconds         = 0;

    bool passed() const noexcept {
      return failures == 0 && checks > 0;
    }

    void check(bool ok, std::function<std::string()> const& what) {
      ++checks;
      if (!ok) {
        ++failures;
        if (failure_examples.size() < 8) {
          failure_examples.push_back(what());
        }
      }
    }

    void absorb(SuiteReport const& r) {
      checks += r.checks;
      failures += r.failures;
      for (auto const& e : r.failure_examples) {
        if (failure_examples.size() < 8) {
          failure_examples.push_back(r.name + ": " + e);
        }
      }
      details[r.name] = r.to_json();
    }

    nlohmann::json to_json() const {
      return {{"suite", name},       {"statement", statement}, {"passed", passed()},
              {"checks", checks},    {"failures", failures},   {"failure_examples", failure_examples},
              {"details", details},  {"seconds", seconds}};
    }
  };

  namespace detail {

    template <class F>
    SuiteReport timed(std::string name, std::string statement, F&& body) {
      SuiteReport r;
      r.name      = std::move(name);
      r.statement = std::move(statement);
      auto t0     = std::chrono::steady_clock::now();
      body(r);
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }

    // Calls f on the reduction of every alternating product of 1..max_syllables
    // nonidentity factors (either starting side).
    template <class O, class F>
    void for_each_ball_element(Amalgam<O> const& engine,
                               std::vector<typename O::element_type> const& factors,
                               std::size_t max_syllables,
                               F&& f) {
      using S = typename Amalgam<O>::syllable;
      std::vector<S> raw;
      std::function<void(Side)> rec = [&](Side s) {
        for (auto const& x : factors) {
          raw.push_back({s, x});
          f(engine.reduce(raw));
          if (raw.size() < max_syllables) {
            rec(other(s));
          }
          raw.pop_back();
        }
      };
      rec(Side::L);
      rec(Side::R);
    }

    inline std::vector<Word> nontrivial_words(std::size_t n) {
      auto all = all_words(n);
      all.erase(all.begin());
      return all;
    }

    inline std::vector<Int> small_integers(long long bound) {
      std::vector<Int> out;
      for (long long x = -bound; x <= bound; ++x) {
        if (x != 0) {
          out.emplace_back(x);
        }
      }
      return out;
    }

    // Random element of Hhat: an even number of factors g_i^(+-1).
    inline Word random_hhat(MultiplicativeSeq const& seq, Rng& rng, std::size_t max_index) {
      for (;;) {
        auto hc = random_h_element(seq, rng, max_index, 6);
        if (hc.second % 2 == 0) {
          return hc.first;
        }
      }
    }

  }  // namespace detail

  ////////////////////////////////////////////////////////////////////////
  // family
  ////////////////////////////////////////////////////////////////////////

  inline SuiteReport membership_suite(RunConfig const& cfg, std::size_t max_k = 8) {
    return detail::timed("membership", "b^n0 in H, b^n0 not in Hhat, b^n0 in H_k, b^n0 not in Hhat_k",
                         [&](SuiteReport& r) {
      Word h(Gen::b, cfg.seq.n(0));
      std::string hs = to_string(h);
      r.check(member_H(cfg.seq, h), [&] { return hs + " not in H"; });
      r.check(!member_Hhat(cfg.seq, h), [&] { return hs + " in Hhat"; });
      for (std::size_t k = 1; k <= max_k; ++k) {
        r.check(member_Hk(cfg.seq, k, h), [&] { return hs + " not in H_" + std::to_string(k); });
        r.check(!member_Hhatk(cfg.seq, k, h), [&] { return hs + " in Hhat_" + std::to_string(k); });
      }
      r.details["element"] = hs;
      r.details["max_k"]   = max_k;
    });
  }

  // H -> F factors through every H_k; the Hhat half is reported separately.
  inline SuiteReport factoring_suite(RunConfig const& cfg,
                                     std::size_t samples   = 500,
                                     std::size_t max_index = 6,
                                     std::size_t max_k     = 8) {
    return detail::timed("factoring", "H subset H_k and Hhat subset Hhat_k on random elements",
                         [&](SuiteReport& r) {
      Rng rng(cfg.seed);
      std::size_t h_fail = 0, hat_fail = 0, even = 0;
      std::vector<std::string> hat_examples;
      for (std::size_t s = 0; s < samples; ++s) {
        auto hc     = random_h_element(cfg.seq, rng, max_index, 8);
        Word w      = hc.first;
        std::size_t c = hc.second;
        bool ok     = member_H(cfg.seq, w);
        for (std::size_t k = 1; k <= max_k && ok; ++k) {
          ok = member_Hk(cfg.seq, k, w);
        }
        h_fail += !ok;
        r.check(ok, [&] { return to_string(w) + " escapes some H_k"; });
        if (c % 2 == 0) {
          ++even;
          bool hat = member_Hhat(cfg.seq, w);
          std::size_t bad_k = 0;
          for (std::size_t k = 1; k <= max_k && hat; ++k) {
            if (!member_Hhatk(cfg.seq, k, w)) {
              hat   = false;
              bad_k = k;
            }
          }
          hat_fail += !hat;
          r.check(hat, [&] {
            return to_string(w) + " in Hhat but not in Hhat_" + std::to_string(bad_k);
          });
        }
      }
      r.details["samples"]       = samples;
      r.details["even_samples"]  = even;
      r.details["H_failures"]    = h_fail;
      r.details["Hhat_failures"] = hat_fail;
    });
  }

  inline SuiteReport separation_suite(RunConfig const& cfg,
                                      std::size_t samples = 100,
                                      std::size_t max_len = 20,
                                      std::size_t slack   = 5) {
    return detail::timed("separation", "w not in H has a finite k with w not in H_k",
                         [&](SuiteReport& r) {
      Rng rng(cfg.seed);
      std::size_t drawn = 0, slack_fail = 0, max_level = 0;
      while (drawn < samples) {
        Word w = random_nontrivial_word(rng, max_len);
        if (member_H(cfg.seq, w)) {
          continue;
        }
        ++drawn;
        std::size_t k = separation_level(cfg.seq, w);
        max_level     = std::max(max_level, k);
        bool at_k     = !member_Hk(cfg.seq, k, w) && !membership(summary_graph(cfg.seq, k), w);
        r.check(at_k, [&] { return to_string(w) + " re-verification at " + std::to_string(k); });
        bool at_slack = !member_Hk(cfg.seq, k + slack, w);
        slack_fail += !at_slack;
        r.check(at_slack, [&] {
          return to_string(w) + " (level " + std::to_string(k) + ") lies in H_"
                 + std::to_string(k + slack);
        });
      }
      r.details["samples"]          = samples;
      r.details["max_level"]        = max_level;
      r.details["slack_failures"]   = slack_fail;
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // centralizers and Yhat
  ////////////////////////////////////////////////////////////////////////

  namespace detail {

    template <class O, class DrawN, class DrawL>
    void centralizer_checks(SuiteReport& r,
                            TranslationToolkit<O> const& tk,
                            std::vector<typename O::element_type> const& factors,
                            std::size_t ball_syllables,
                            Rng& rng,
                            DrawN&& draw_n,
                            DrawL&& draw_h) {
      auto const& G = tk.engine();
      auto ell      = tk.ell();
      for (std::size_t s = 0; s < 100; ++s) {
        auto n  = G.make(Side::L, draw_n(rng));
        bool ok = G.equal(G.mult(ell, n), G.mult(n, ell));
        r.check(ok, [&] { return "ell does not commute with " + G.print(n); });
      }
      for (long long q = 1; q <= 8; ++q) {
        auto p  = G.pow(ell, Int(q));
        bool in = p.empty() || (p.syllable_length() == 1 && G.oracle().sub_member(p[0].side, p[0].elt));
        r.check(!in, [&] { return "ell^" + std::to_string(q) + " lies in N"; });
      }
      std::uniform_int_distribution<int> side(0, 1);
      std::uniform_int_distribution<std::size_t> len(0, 6);
      std::size_t done = 0;
      while (done < 100) {
        std::vector<typename Amalgam<O>::syllable> raw;
        std::size_t L = len(rng);
        for (std::size_t k = 0; k < L; ++k) {
          raw.push_back({side(rng) ? Side::R : Side::L, draw_h(rng)});
        }
        auto m = G.reduce(raw);
        if (!tk.is_translation(m)) {
          continue;
        }
        ++done;
        auto d  = tk.decompose(m);
        bool ok = G.equal(tk.compose(d.n, d.q), m);
        r.check(ok, [&] { return "decompose round trip fails on " + G.print(m); });
      }
      std::size_t ball = 0, mismatches = 0;
      for_each_ball_element(G, factors, ball_syllables, [&](auto const& g) {
        ++ball;
        bool fast  = tk.centralizer_member(g);
        bool brute = G.equal(G.mult(G.mult(g, ell), G.invert(g)), ell);
        if (fast != brute) {
          ++mismatches;
          r.check(false, [&] { return "centralizer disagreement at " + G.print(g); });
        }
      });
      ++r.checks;
      r.details["ball_size"]  = ball;
      r.details["mismatches"] = mismatches;
    }

  }  // namespace detail

  inline SuiteReport centralizer_suite(RunConfig const& cfg, std::size_t factor_len = 4) {
    return detail::timed("centralizer", "C_G(ell) = N x <ell> for ell = h hbar^-1",
                         [&](SuiteReport& r) {
      Rng rng(cfg.seed);
      {
        SuiteReport k;
        k.name  = "klein";
        auto tk = klein_toolkit();
        std::uniform_int_distribution<long long> small(-20, 20);
        detail::centralizer_checks(
            k, tk, detail::small_integers(static_cast<long long>(factor_len)), cfg.ball_radius, rng,
            [&](Rng& g) { return Int(2 * small(g)); }, [&](Rng& g) { return Int(small(g)); });
        r.absorb(k);
      }
      {
        SuiteReport y;
        y.name   = "Y";
        TowerContext ctx(cfg.seq);
        auto tk  = ctx.y_toolkit();
        auto seq = cfg.seq;
        detail::centralizer_checks(
            y, tk, detail::nontrivial_words(factor_len), cfg.ball_radius, rng,
            [&](Rng& g) { return detail::random_hhat(seq, g, 6); },
            [&](Rng& g) { return random_h_element(seq, g, 6, 4).first; });
        r.absorb(y);
      }
    });
  }

  inline SuiteReport yhat_suite(RunConfig const& cfg, std::size_t factor_len = 4) {
    return detail::timed("yhat", "yhat_member(g) iff g z g^-1 = z", [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      std::size_t ball = 0, members = 0;
      detail::for_each_ball_element(ctx.G(), detail::nontrivial_words(factor_len), cfg.ball_radius,
                                    [&](GElement const& g) {
        ++ball;
        bool fast  = ctx.yhat_member(g);
        bool brute = ctx.commutes_with_z(g);
        members += fast;
        if (fast != brute) {
          r.check(false, [&] { return "disagreement at " + ctx.G().print(g); });
        }
      });
      ++r.checks;
      r.check(ctx.yhat_member(ctx.z()), [] { return "z not in Yhat"; });
      r.check(!ctx.yhat_member(ctx.g(0)), [] { return "g_0 in Yhat"; });
      r.details["ball_size"] = ball;
      r.details["members"]   = members;
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Klein bottles, tori, injections
  ////////////////////////////////////////////////////////////////////////

  inline SuiteReport klein_suite(RunConfig const& cfg) {
    return detail::timed("klein", "g_i^2 = gbar_i^2 in G", [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      auto const& G = ctx.G();
      for (std::size_t i = 0; i <= cfg.max_i; ++i) {
        auto [g, gb] = ctx.klein_pair(i);
        r.check(G.equal(G.pow(g, 2), G.pow(gb, 2)),
                [&] { return "g_" + std::to_string(i) + "^2 != gbar_" + std::to_string(i) + "^2"; });
        r.check(!G.equal(g, gb), [&] { return "g_" + std::to_string(i) + " = gbar_" + std::to_string(i); });
      }
      r.details["max_i"] = cfg.max_i;
    });
  }

  // Every reduced word of length <= n in u, ubar (as Klein elements).
  inline std::vector<KleinElement> klein_ball(std::size_t n) {
    auto K = klein_engine();
    std::vector<KleinElement> out;
    std::vector<std::pair<std::vector<KleinEngine::syllable>, int>> frontier{{{}, -1}};
    out.push_back(K.identity());
    for (std::size_t len = 0; len < n; ++len) {
      std::vector<std::pair<std::vector<KleinEngine::syllable>, int>> next;
      for (auto const& [raw, prev] : frontier) {
        for (int letter = 0; letter < 4; ++letter) {
          if (prev >= 0 && letter == (prev ^ 1)) {
            continue;
          }
          auto r = raw;
          r.push_back({letter < 2 ? Side::L : Side::R, Int((letter & 1) ? -1 : 1)});
          out.push_back(K.reduce(r));
          next.emplace_back(std::move(r), letter);
        }
      }
      frontier = std::move(next);
    }
    return out;
  }

  inline SuiteReport torus_suite(RunConfig const& cfg, std::size_t word_len = 6) {
    return detail::timed("torus", "T_i = K_i cap Yhat", [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      auto ktk   = klein_toolkit();
      auto ball  = klein_ball(word_len);
      for (std::size_t i = 0; i <= cfg.max_i; ++i) {
        auto [t1, t2] = ctx.torus_gens(i);
        r.check(ctx.yhat_member(t1) && ctx.yhat_member(t2),
                [&] { return "torus generator of T_" + std::to_string(i) + " not in Yhat"; });
        std::size_t in_T = 0;
        for (auto const& k : ball) {
          GElement g     = ctx.klein_image(i, k);
          bool klein_T   = ktk.is_translation(k);
          bool yhat      = ctx.yhat_member(g);
          auto normal_T  = ctx.in_T(i, g);
          in_T += klein_T;
          r.check(klein_T == yhat && normal_T && *normal_T == klein_T, [&] {
            return "i=" + std::to_string(i) + " " + klein_engine().print(k) + " -> "
                   + ctx.G().print(g);
          });
        }
        r.details["T_" + std::to_string(i) + "_members"] = in_T;
      }
      r.details["klein_ball"] = ball.size();
    });
  }

  inline SuiteReport injection_suite_tower(RunConfig const& cfg,
                                           std::size_t samples   = 200,
                                           std::size_t max_index = 3) {
    return detail::timed("injection", "K_i *_T_i Kcheck_i injects into D", [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      Rng rng(cfg.seed);
      auto K = klein_engine();
      for (std::size_t i = 0; i <= max_index; ++i) {
        std::uniform_int_distribution<long long> e(-4, 4);
        std::uniform_int_distribution<std::size_t> len(1, 4);
        auto sample = [&](Rng& g) {
          auto k = random_element(K, g, len(g), [&](Rng& h) {
            long long x = 0;
            while (x == 0) {
              x = e(h);
            }
            return Int(x);
          });
          return ctx.klein_image(i, k);
        };
        auto in_C = [&](GElement const& x) { return ctx.in_T(i, x).value_or(false); };
        auto rep  = injection_suite<DOracle, Rng>(ctx.D(), sample, in_C, samples, 4, rng);
        std::string tag = "i=" + std::to_string(i);
        r.check(rep.violations == 0, [&] {
          return tag + " violation " + (rep.violation_examples.empty() ? "" : rep.violation_examples[0]);
        });
        r.check(rep.hypothesis_failures == 0, [&] {
          return tag + " hypothesis " + (rep.hypothesis_examples.empty() ? "" : rep.hypothesis_examples[0]);
        });
        r.details[tag] = nlohmann::json{{"samples", rep.samples},
                          {"violations", rep.violations},
                          {"hypothesis_failures", rep.hypothesis_failures}};
      }
      // D identifications inside P_i.
      auto const& D = ctx.D();
      for (std::size_t i = 0; i <= max_index; ++i) {
        auto p = ctx.promislow_gens(i);
        r.check(D.equal(D.pow(p[0], 2), D.pow(p[2], 2)), [&] { return "g^2 != gcheck^2"; });
        r.check(D.equal(D.mult(p[0], D.invert(p[1])), D.mult(p[2], D.invert(p[3]))),
                [&] { return "g gbar^-1 != gcheck gbarcheck^-1"; });
      }
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Persistence
  ////////////////////////////////////////////////////////////////////////

  inline SuiteReport persistence_suite(RunConfig const& cfg, std::optional<std::size_t> only_q = {}) {
    return detail::timed("persistence", "generators of P_q are q!-th powers in D", [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      nlohmann::json table = nlohmann::json::array();
      std::size_t lo = only_q.value_or(1), hi = only_q.value_or(cfg.max_q);
      for (std::size_t q = lo; q <= hi; ++q) {
        for (auto const& row : persistence_witness(ctx, q)) {
          r.check(row.verified, [&] { return row.name + " is not base^" + row.exponent.str(); });
          table.push_back({{"q", q},
                           {"generator", row.name},
                           {"element", ctx.D().print(row.generator)},
                           {"base", ctx.D().print(row.base)},
                           {"exponent", row.exponent.str()},
                           {"verified", row.verified}});
        }
      }
      r.details["table"] = table;
    });
  }

  // Completion-based quotients of F of small degree used by the coset checks.
  inline std::vector<PermRep> coset_quotients(unsigned long long seed,
                                              std::size_t count      = 6,
                                              std::size_t max_degree = 8) {
    Rng rng(seed);
    std::vector<PermRep> out;
    // Fixed small ones first: trivial, b of order 2, a 3-cycle of a.
    out.push_back(completion(from_generators({word_a(), word_b()})).rep);
    out.push_back(completion(from_generators({word_a(), Word(Gen::b, 2)})).rep);
    while (out.size() < count) {
      std::vector<Word> gens;
      std::uniform_int_distribution<int> n(1, 3);
      int k = n(rng);
      for (int j = 0; j < k; ++j) {
        gens.push_back(random_nontrivial_word(rng, 5));
      }
      auto rep = completion(from_generators(gens)).rep;
      if (rep.degree() < 4 || rep.degree() > max_degree) {
        continue;
      }
      bool dup = false;
      for (auto const& o : out) {
        dup = dup || o == rep;
      }
      if (!dup) {
        out.push_back(rep);
      }
    }
    return out;
  }

  inline SuiteReport coset_suite(RunConfig const& cfg,
                                 std::size_t quotients = 8,
                                 std::size_t max_index = 4,
                                 std::size_t samples   = 40) {
    return detail::timed("coset", "phi(d)^(q!) lies in every index-q subgroup of phi(D)",
                         [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      Rng rng(cfg.seed);
      auto const& G = ctx.G();
      auto const& D = ctx.D();
      std::vector<DElement> ds;
      std::uniform_int_distribution<std::size_t> syl(1, 3);
      for (std::size_t s = 0; s < samples; ++s) {
        ds.push_back(random_element(D, rng, syl(rng), [&](Rng& g) {
          return random_element(G, g, syl(g), [](Rng& h) { return random_nontrivial_word(h, 4); });
        }));
      }
      nlohmann::json qs = nlohmann::json::array();
      for (auto const& rep : coset_quotients(cfg.seed, quotients, 8)) {
        auto res = coset_power_suite(ctx, rep, max_index, ds);
        r.check(res.ok(), [&] {
          return "degree " + std::to_string(rep.degree()) + ": "
                 + (res.failure_examples.empty() ? "" : res.failure_examples[0]);
        });
        qs.push_back({{"degree", rep.degree()},
                      {"order", FiniteGroup(rep).order()},
                      {"subgroups", res.subgroups},
                      {"checks", res.checks},
                      {"failures", res.failures}});
      }
      r.details["quotients"] = qs;
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Crystallographic model, abelianization, UPP
  ////////////////////////////////////////////////////////////////////////

  inline SuiteReport model_suite(RunConfig const&, std::size_t radius = 6) {
    return detail::timed("model", "relators vanish, torsion-free ball, rank-3 lattice of index 4",
                         [&](SuiteReport& r) {
      auto m = promislow_model();
      auto c = check_model(m, radius);
      r.check(c.relators_vanish, [] { return "a relator does not vanish"; });
      r.check(c.xy_squared_nontrivial, [] { return "(xy)^2 is trivial"; });
      r.check(c.lattice_rank3, [] { return "x^2, y^2, (xy)^2 do not span rank 3"; });
      r.check(c.torsion_free_in_ball, [] { return "torsion in the ball"; });
      r.check(c.lattice_translations, [] { return "a translation outside the lattice"; });
      r.check(c.point_classes == 4, [&] { return std::to_string(c.point_classes) + " point classes"; });
      r.check(hom_check(promislow_presentation(), std::vector<AffineElement>{m.x, m.y}, AffineGroup{}),
              [] { return "hom_check fails"; });
      r.details["ball_size"]     = c.ball_size;
      r.details["point_classes"] = c.point_classes;
      r.details["problems"]      = c.problems;
      r.details["x"]             = to_string(m.x);
      r.details["y"]             = to_string(m.y);
    });
  }

  inline SuiteReport abelianization_suite(RunConfig const&) {
    return detail::timed("abelianization", "invariant factors by two independent SNF routes",
                         [&](SuiteReport& r) {
      auto report = [&](std::string const& name, Presentation const& p) {
        auto a = abelianization(p);
        auto b = abelianization_by_minors(p);
        r.check(a.rank == b.rank && a.torsion == b.torsion,
                [&] { return name + ": " + a.describe() + " vs " + b.describe(); });
        auto j              = a.to_json();
        j["description"]    = a.describe();
        j["presentation"]   = to_string(p);
        r.details[name]     = j;
      };
      auto K = klein_presentation();
      std::vector<Relator> T{K.parse_word("u u"), K.parse_word("u V")};
      report("promislow", promislow_presentation());
      report("klein", K);
      report("canonical_double", double_presentation(K, T, GluingKind::canonical));
      report("swap_double", double_presentation(K, T, GluingKind::swap));
      bool same = r.details["canonical_double"]["torsion"] == r.details["promislow"]["torsion"]
                  && r.details["canonical_double"]["rank"] == r.details["promislow"]["rank"];
      r.details["canonical_matches_presentation"] = same;
      bool swap = r.details["swap_double"]["torsion"] == r.details["promislow"]["torsion"]
                  && r.details["swap_double"]["rank"] == r.details["promislow"]["rank"];
      r.details["swap_matches_presentation"] = swap;
    });
  }

  inline SuiteReport upp_suite(RunConfig const& cfg, std::size_t z_samples = 200) {
    return detail::timed("upp", "ordered Z has unique products; the model has a 14-element failure set",
                         [&](SuiteReport& r) {
      Rng rng(cfg.seed);
      IntegerGroup Z;
      std::uniform_int_distribution<std::size_t> size(1, 50);
      std::uniform_int_distribution<long long> val(-100, 100);
      for (std::size_t s = 0; s < z_samples; ++s) {
        std::vector<Int> A, B;
        std::size_t na = size(rng), nb = size(rng);
        for (std::size_t k = 0; k < na; ++k) {
          A.emplace_back(val(rng));
        }
        for (std::size_t k = 0; k < nb; ++k) {
          B.emplace_back(val(rng));
        }
        A = dedupe(A, Z);
        B = dedupe(B, Z);
        r.check(!unique_products(A, B, Z).empty(), [] { return "a Z-subset pair without unique product"; });
      }
      auto m    = promislow_model();
      auto pool = ball({m.x, m.y}, cfg.ball_radius);
      SearchConfig sc;
      sc.size   = 14;
      sc.budget = cfg.search_budget;
      sc.seed   = cfg.seed;
      sc.jobs   = cfg.jobs;
      AffineGroup A;
      auto res  = search_failure_set(pool, A, sc);
      r.details["search"] = {{"pool", pool.size()},
                             {"evaluations", res.evaluations},
                             {"restarts", res.restarts},
                             {"found", res.found.has_value()}};
      r.check(res.found.has_value(), [] { return "no failure set within the search budget"; });
      if (res.found) {
        std::vector<AffineElement> S;
        for (auto i : *res.found) {
          S.push_back(pool[i]);
        }
        auto t0   = std::chrono::steady_clock::now();
        auto cert = upp_failure_certificate(S, A);
        std::string why;
        bool ok   = cert.failure && verify_upp_certificate(UppCertificate::from_json(cert.to_json()), A, &why);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.check(ok, [&] { return "certificate rejected: " + why; });
        r.check(dt < 1.0, [&] { return "certificate check took " + std::to_string(dt) + " s"; });
        r.details["certificate"]         = cert.to_json();
        r.details["certificate_seconds"] = dt;
      }
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Residual finiteness witnesses
  ////////////////////////////////////////////////////////////////////////

  inline SuiteReport rf_suite(RunConfig const& cfg, std::size_t samples = 50) {
    return detail::timed("rf", "nontrivial elements of G survive in a finite double",
                         [&](SuiteReport& r) {
      TowerContext ctx(cfg.seq);
      auto const& G = ctx.G();
      Rng rng(cfg.seed);
      std::uniform_int_distribution<std::size_t> syl(1, 4);
      std::size_t certified = 0, full = 0, tamper_caught = 0, drawn = 0;
      nlohmann::json uncertified = nlohmann::json::array();
      while (drawn < samples) {
        auto x = random_element(G, rng, syl(rng), [](Rng& g) { return random_nontrivial_word(g, 4); });
        if (G.is_identity(x)) {
          continue;
        }
        ++drawn;
        std::string xs = G.print(x);
        std::optional<RFCertificate> c;
        try {
          c = rf_witness_G(ctx, x);
        } catch (CapExceeded const& e) {
          uncertified.push_back(xs);
          r.check(false, [&] { return "no certificate for " + xs; });
          continue;
        }
        ++certified;
        full += c->image_length == x.syllable_length();
        std::string why;
        r.check(verify_certificate(ctx, RFCertificate::from_json(c->to_json()), &why),
                [&] { return xs + ": " + why; });
        auto bad = *c;
        Perm t   = identity_perm(bad.rep.degree());
        std::swap(t[0], t[1]);
        bad.syllable_images[0] = compose(bad.syllable_images[0], t);
        bool caught = !verify_certificate(ctx, bad);
        auto flip   = *c;
        flip.nontrivial = !flip.nontrivial;
        caught = caught && !verify_certificate(ctx, flip);
        tamper_caught += caught;
        r.check(caught, [&] { return "tampered certificate of " + xs + " accepted"; });
      }
      r.details["samples"]          = samples;
      r.details["certified"]        = certified;
      r.details["full_length"]      = full;
      r.details["tampering_caught"] = tamper_caught;
      r.details["uncertified"]      = uncertified;
    });
  }

  ////////////////////////////////////////////////////////////////////////

  inline std::vector<std::string> suite_names() {
    return {"abelianization", "centralizer", "coset",   "factoring", "injection", "klein",
            "membership",     "model",       "persistence", "rf",    "separation", "torus",
            "upp",            "yhat"};
  }

  inline SuiteReport run_suite(std::string const& name, RunConfig const& cfg) {
    if (name == "membership") return membership_suite(cfg);
    if (name == "factoring") return factoring_suite(cfg);
    if (name == "separation") return separation_suite(cfg);
    if (name == "centralizer") return centralizer_suite(cfg);
    if (name == "yhat") return yhat_suite(cfg);
    if (name == "klein") return klein_suite(cfg);
    if (name == "torus") return torus_suite(cfg);
    if (name == "injection") return injection_suite_tower(cfg);
    if (name == "persistence") return persistence_suite(cfg);
    if (name == "coset") return coset_suite(cfg);
    if (name == "model") return model_suite(cfg);
    if (name == "abelianization") return abelianization_suite(cfg);
    if (name == "upp") return upp_suite(cfg);
    if (name == "rf") return rf_suite(cfg);
    throw ParseError("unknown suite '" + name + "'");
  }

}  // namespace persist
