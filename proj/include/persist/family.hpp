#pragma once

// The subgroups H = <a^-i b^(n_i) a^i : i >= 0> of F(a, b), their summaries
// H_k = <a^k, a^-i b^(n_i) a^i : i < k>, and the index-2 subgroups Hhat,
// Hhat_k given by the double covers that cross sheets once around every
// b-circle.
//
// Two routes are provided for every membership question:
//
//  * A lazy walk on the (possibly infinite) graph.  The graph of H is the ray
//    0, 1, 2, ... where reading a^-1 moves from position p to p + 1, with a
//    b-circle of length n_p attached at p.  The summary graph of H_k closes
//    the ray into an a-circle of length k.  The hat graphs double every
//    b-circle (length 2 n_p, the two lifts of p at offsets 0 and n_p) and,
//    for the summary, also the a-circle: crossing from position k - 1 to 0
//    swaps sheets.  The walk only ever evaluates n_p at positions it visits,
//    so it decides membership in the infinitely generated H directly.
//
//  * Explicit Stallings graphs of bounded size (summary, truncation and their
//    double covers) for cross-checks at small scale.
//
// Truncation lemma: a closed path at the base of the graph of H that uses
// m letters a^(+-1) never reaches a position beyond m / 2, so
// w in H  iff  w in <g_0, ..., g_L> for L = floor(|w|_a / 2).

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"
#include "sequence.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace persist {

  // Positions beyond this on the ray are refused; n_p is astronomically large
  // there anyway.
  inline constexpr std::size_t max_ray_position = 1'000'000;

  // g_i = a^-i b^(n_i) a^i
  inline Word generator(MultiplicativeSeq const& seq, std::size_t i) {
    Int ii = static_cast<unsigned long long>(i);
    Word w(Gen::a, Int(-ii));
    w.append(Gen::b, seq.n(i));
    w.append(Gen::a, ii);
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // Lazy walks
  ////////////////////////////////////////////////////////////////////////

  struct WalkState {
    std::size_t position = 0;
    Int offset           = 0;  // position along the b-circle at `position`

    friend bool operator==(WalkState const&, WalkState const&) = default;
  };

  class FamilyWalker {
   public:
    // k == 0 walks the ray (H or Hhat); k >= 1 walks the k-th summary.
    FamilyWalker(MultiplicativeSeq seq, std::size_t k, bool hat)
        : _seq(std::move(seq)), _k(k), _hat(hat) {
      if (k > 0) {
        _seq.check_multiplicative(k);
      }
    }

    std::optional<WalkState> walk(Word const& w) const {
      WalkState st;
      for (auto const& s : w.syllables()) {
        if (s.gen == Gen::b) {
          st.offset = mod(st.offset + s.exp, circle(st.position));
          continue;
        }
        // a-letters only move along the ray / a-circle from an attachment
        // point of a b-circle.
        bool sheet;
        Int const& n = _seq.n(st.position);
        if (st.offset == 0) {
          sheet = false;
        } else if (_hat && st.offset == n) {
          sheet = true;
        } else {
          return std::nullopt;
        }
        Int e = s.exp;  // reading a^e moves the position by -e
        Int const pos = static_cast<unsigned long long>(st.position);
        if (_k == 0) {
          Int next = pos - e;
          if (next < 0) {
            return std::nullopt;
          }
          st.position = to_size(next, max_ray_position, "ray position");
        } else {
          Int k    = static_cast<unsigned long long>(_k);
          Int next = mod(pos - e, k);
          Int wraps;
          if (e > 0) {
            wraps = (e + k - pos - 1) / k;
          } else {
            wraps = (-e + pos) / k;
          }
          if (_hat && (wraps & 1) != 0) {
            sheet = !sheet;
          }
          st.position = static_cast<std::size_t>(next);
        }
        st.offset = sheet ? _seq.n(st.position) : Int(0);
      }
      return st;
    }

    bool closed(Word const& w) const {
      auto st = walk(w);
      return st && st->position == 0 && st->offset == 0;
    }

    // For w in the plain graph's subgroup, the sheet its lift ends on in the
    // hat graph: the value of the induced homomorphism to Z/2.
    std::optional<bool> sheet(Word const& w) const {
      FamilyWalker hat_walker(_seq, _k, true);
      auto st = hat_walker.walk(w);
      if (!st || st->position != 0) {
        return std::nullopt;
      }
      if (st->offset == 0) {
        return false;
      }
      if (st->offset == _seq.n(0)) {
        return true;
      }
      return std::nullopt;
    }

   private:
    Int circle(std::size_t position) const {
      Int const& n = _seq.n(position);
      return _hat ? Int(2 * n) : n;
    }

    MultiplicativeSeq _seq;
    std::size_t _k;
    bool _hat;
  };

  inline bool member_H(MultiplicativeSeq const& seq, Word const& w) {
    return FamilyWalker(seq, 0, false).closed(w);
  }

  inline bool member_Hhat(MultiplicativeSeq const& seq, Word const& w) {
    return FamilyWalker(seq, 0, true).closed(w);
  }

  inline bool member_Hk(MultiplicativeSeq const& seq, std::size_t k, Word const& w) {
    if (k == 0) {
      throw DomainError("summary index k must be >= 1");
    }
    return FamilyWalker(seq, k, false).closed(w);
  }

  inline bool member_Hhatk(MultiplicativeSeq const& seq, std::size_t k, Word const& w) {
    if (k == 0) {
      throw DomainError("summary index k must be >= 1");
    }
    return FamilyWalker(seq, k, true).closed(w);
  }

  // Value of chi : H -> Z/2 (chi(g_i) = 1) on w in H.
  inline std::optional<bool> chi_H(MultiplicativeSeq const& seq, Word const& w) {
    return FamilyWalker(seq, 0, false).sheet(w);
  }

  ////////////////////////////////////////////////////////////////////////
  // Explicit graphs
  ////////////////////////////////////////////////////////////////////////

  // Summary graph of H_k: a-circle of length k, b-circle of length n_j
  // attached at position j.
  inline CoreGraph summary_graph(MultiplicativeSeq const& seq, std::size_t k) {
    if (k == 0) {
      throw DomainError("summary index k must be >= 1");
    }
    seq.check_multiplicative(k);
    Int total = static_cast<unsigned long long>(k);
    for (std::size_t j = 0; j < k; ++j) {
      total += seq.n(j) - 1;
    }
    std::size_t size = to_size(total, max_graph_letters, "summary graph size");
    CoreGraph g(k, 0);
    for (Vertex p = 0; p < k; ++p) {
      g.add_edge(static_cast<Vertex>((p + 1) % k), Gen::a, p);
    }
    for (Vertex p = 0; p < k; ++p) {
      std::size_t n = static_cast<std::size_t>(seq.n(p));
      Vertex prev   = p;
      for (std::size_t i = 1; i < n; ++i) {
        Vertex v = g.add_vertex();
        g.add_edge(prev, Gen::b, v);
        prev = v;
      }
      g.add_edge(prev, Gen::b, p);
    }
    (void) size;
    return canonicalize(g);
  }

  // <a^k, g_0, ..., g_{k-1}> by folding: the independent route to the
  // summary graph.
  inline CoreGraph summary_graph_by_folding(MultiplicativeSeq const& seq, std::size_t k) {
    std::vector<Word> gens{Word(Gen::a, Int(static_cast<unsigned long long>(k)))};
    for (std::size_t j = 0; j < k; ++j) {
      gens.push_back(generator(seq, j));
    }
    return from_generators(gens);
  }

  // <g_0, ..., g_L> by folding.
  inline CoreGraph truncation_graph(MultiplicativeSeq const& seq, std::size_t L) {
    std::vector<Word> gens;
    for (std::size_t j = 0; j <= L; ++j) {
      gens.push_back(generator(seq, j));
    }
    return from_generators(gens);
  }

  namespace detail {
    inline std::vector<std::uint8_t> sheet_character(CoreGraph const& g,
                                                     FamilyWalker const& walker) {
      std::vector<std::uint8_t> chi;
      for (auto const& w : basis(g)) {
        auto s = walker.sheet(w);
        if (!s) {
          throw DomainError("basis element " + to_string(w)
                            + " does not close up in the family graph");
        }
        chi.push_back(*s ? 1 : 0);
      }
      return chi;
    }
  }  // namespace detail

  inline CoreGraph hat_summary_graph(MultiplicativeSeq const& seq, std::size_t k) {
    CoreGraph g = summary_graph(seq, k);
    auto chi    = detail::sheet_character(g, FamilyWalker(seq, k, false));
    return double_cover(g, chi);
  }

  inline CoreGraph hat_truncation_graph(MultiplicativeSeq const& seq, std::size_t L) {
    CoreGraph g = truncation_graph(seq, L);
    auto chi    = detail::sheet_character(g, FamilyWalker(seq, 0, false));
    return double_cover(g, chi);
  }

  inline std::size_t truncation_level(Word const& w) {
    return to_size(w.length(Gen::a) / 2, max_ray_position, "truncation level");
  }

  // Membership in H through the explicit truncation graph.
  inline bool member_H_by_truncation(MultiplicativeSeq const& seq, Word const& w) {
    return membership(truncation_graph(seq, truncation_level(w)), w);
  }

  // Membership in Hhat: w in H and the spanning-tree factorization has even
  // exponent sum (every spanning-tree basis element of the truncation graph
  // is some g_i^(+-1), and chi(g_i) = 1).
  inline bool member_Hhat_by_truncation(MultiplicativeSeq const& seq, Word const& w) {
    CoreGraph g = truncation_graph(seq, truncation_level(w));
    auto e      = express(g, w);
    if (!e) {
      return false;
    }
    Int total = 0;
    for (auto const& [i, x] : *e) {
      total += x;
    }
    return (total & 1) == 0;
  }

  // Least k >= 1 with w not in H_k.
  inline std::size_t separation_level(MultiplicativeSeq const& seq,
                                      Word const& w,
                                      std::size_t cap = 64) {
    if (member_H(seq, w)) {
      throw DomainError(to_string(w) + " lies in H; no separation level exists");
    }
    for (std::size_t k = 1; k <= cap; ++k) {
      if (!member_Hk(seq, k, w)) {
        return k;
      }
    }
    throw CapExceeded("separation level of " + to_string(w) + " exceeds cap "
                      + std::to_string(cap));
  }

  // Explicit family graphs, cached per (kind, index).
  class FamilyGraphs {
   public:
    enum class Kind { summary, hat_summary, truncation, hat_truncation };

    explicit FamilyGraphs(MultiplicativeSeq seq) : _seq(std::move(seq)) {}

    MultiplicativeSeq const& seq() const noexcept {
      return _seq;
    }

    std::shared_ptr<CoreGraph const> get(Kind kind, std::size_t index) const {
      {
        std::lock_guard<std::mutex> lock(_mutex);
        auto it = _cache.find({kind, index});
        if (it != _cache.end()) {
          return it->second;
        }
      }
      std::shared_ptr<CoreGraph const> g;
      switch (kind) {
        case Kind::summary:
          g = std::make_shared<CoreGraph const>(summary_graph(_seq, index));
          break;
        case Kind::hat_summary:
          g = std::make_shared<CoreGraph const>(hat_summary_graph(_seq, index));
          break;
        case Kind::truncation:
          g = std::make_shared<CoreGraph const>(truncation_graph(_seq, index));
          break;
        case Kind::hat_truncation:
          g = std::make_shared<CoreGraph const>(hat_truncation_graph(_seq, index));
          break;
      }
      std::lock_guard<std::mutex> lock(_mutex);
      return _cache.emplace(std::make_pair(kind, index), g).first->second;
    }

   private:
    MultiplicativeSeq _seq;
    mutable std::mutex _mutex;
    mutable std::map<std::pair<Kind, std::size_t>, std::shared_ptr<CoreGraph const>> _cache;
  };

}  // namespace persist
