#pragma once

// Finite permutation groups given by two generators: element tables, Cayley
// graphs, subgroup closures and the low-index subgroups used by coset checks.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "perm.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace persist {

  inline constexpr std::size_t max_finite_group_order = 1u << 22;

  // Q = <rho(a), rho(b)> with an index for every element and the right Cayley
  // graph for the two generators.
  class FiniteGroup {
   public:
    explicit FiniteGroup(PermRep rep, std::size_t limit = max_finite_group_order)
        : _rep(std::move(rep)) {
      if (!_rep.valid()) {
        throw DomainError("permutation representation is not valid");
      }
      std::size_t n = _rep.degree();
      _elements.push_back(identity_perm(n));
      _index.emplace(_elements.front(), 0);
      _parent.push_back({0, 0});
      for (std::size_t i = 0; i < _elements.size(); ++i) {
        for (std::size_t g = 0; g < 2; ++g) {
          Perm next = compose(_elements[i], g == 0 ? _rep.a : _rep.b);
          auto [it, fresh] = _index.emplace(next, _elements.size());
          if (fresh) {
            if (_elements.size() >= limit) {
              throw CapExceeded("finite group order exceeds " + std::to_string(limit));
            }
            _elements.push_back(std::move(next));
            _parent.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(g)});
          }
        }
      }
      _cayley.resize(_elements.size());
      for (std::size_t i = 0; i < _elements.size(); ++i) {
        for (std::size_t g = 0; g < 2; ++g) {
          _cayley[i][g] = static_cast<std::uint32_t>(
              _index.at(compose(_elements[i], g == 0 ? _rep.a : _rep.b)));
        }
      }
    }

    PermRep const& rep() const noexcept {
      return _rep;
    }

    std::size_t order() const noexcept {
      return _elements.size();
    }

    std::vector<Perm> const& elements() const noexcept {
      return _elements;
    }

    std::optional<std::size_t> index_of(Perm const& p) const {
      auto it = _index.find(p);
      if (it == _index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    // Element i times generator g (0 = a, 1 = b).
    std::size_t right(std::size_t i, std::size_t g) const noexcept {
      return _cayley[i][g];
    }

    // Breadth-first parent: element i = parent(i) * generator(i).
    std::pair<std::size_t, std::size_t> parent(std::size_t i) const noexcept {
      return {_parent[i].first, _parent[i].second};
    }

   private:
    PermRep _rep;
    std::vector<Perm> _elements;
    std::unordered_map<Perm, std::size_t, PermHash> _index;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> _parent;
    std::vector<std::array<std::uint32_t, 2>> _cayley;
  };

  // A subgroup of a finite group, as a sorted element list and a lookup set.
  class FiniteSubgroup {
   public:
    FiniteSubgroup() = default;

    FiniteSubgroup(std::vector<Perm> const& gens, std::size_t degree)
        : _elements(closure(gens, degree)), _set(_elements.begin(), _elements.end()) {}

    explicit FiniteSubgroup(std::vector<Perm> elements)
        : _elements(std::move(elements)), _set(_elements.begin(), _elements.end()) {
      std::sort(_elements.begin(), _elements.end());
    }

    bool contains(Perm const& p) const {
      return _set.count(p) != 0;
    }

    std::size_t order() const noexcept {
      return _elements.size();
    }

    std::vector<Perm> const& elements() const noexcept {
      return _elements;
    }

   private:
    std::vector<Perm> _elements;
    PermSet _set;
  };

  // Transitive actions of Q on {0..q-1} whose point stabilizers of 0 are the
  // subgroups of index q.  Each subgroup appears once: actions are listed in
  // the canonical numbering where points are first reached in breadth-first
  // order from 0 (a then b, forward moves only).
  struct LowIndexSubgroup {
    std::size_t index;
    Perm action_a;
    Perm action_b;
    FiniteSubgroup subgroup;
  };

  namespace detail {

    inline bool canonical_transitive(Perm const& a, Perm const& b) {
      std::size_t q = a.size();
      std::vector<std::uint32_t> label(q, UINT32_MAX);
      std::vector<std::uint32_t> order{0};
      label[0] = 0;
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (Perm const* p : {&a, &b}) {
          std::uint32_t w = (*p)[order[i]];
          if (label[w] == UINT32_MAX) {
            label[w] = static_cast<std::uint32_t>(order.size());
            order.push_back(w);
          }
        }
      }
      if (order.size() != q) {
        return false;  // not transitive (forward orbit of a finite action)
      }
      for (std::size_t v = 0; v < q; ++v) {
        if (label[v] != v) {
          return false;
        }
      }
      return true;
    }

    inline std::vector<Perm> all_perms(std::size_t q) {
      std::vector<Perm> out;
      Perm p = identity_perm(q);
      do {
        out.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
      return out;
    }

  }  // namespace detail

  // All subgroups of Q of index at most max_index.
  inline std::vector<LowIndexSubgroup> low_index_subgroups(FiniteGroup const& Q,
                                                           std::size_t max_index) {
    std::vector<LowIndexSubgroup> out;
    for (std::size_t q = 1; q <= max_index; ++q) {
      auto perms = detail::all_perms(q);
      for (auto const& sa : perms) {
        for (auto const& sb : perms) {
          if (!detail::canonical_transitive(sa, sb)) {
            continue;
          }
          // Define the action on Q along the breadth-first tree and check
          // every Cayley edge; it is a homomorphism Q -> Sym(q) iff all agree.
          std::vector<Perm> act(Q.order());
          act[0]  = identity_perm(q);
          bool ok = true;
          for (std::size_t i = 1; i < Q.order(); ++i) {
            auto [p, g] = Q.parent(i);
            act[i]      = compose(act[p], g == 0 ? sa : sb);
          }
          for (std::size_t i = 0; i < Q.order() && ok; ++i) {
            ok = compose(act[i], sa) == act[Q.right(i, 0)]
                 && compose(act[i], sb) == act[Q.right(i, 1)];
          }
          if (!ok) {
            continue;
          }
          std::vector<Perm> stab;
          for (std::size_t i = 0; i < Q.order(); ++i) {
            if (act[i][0] == 0) {
              stab.push_back(Q.elements()[i]);
            }
          }
          out.push_back({q, sa, sb, FiniteSubgroup(std::move(stab))});
        }
      }
    }
    return out;
  }

  // Base and strong generating set (Schreier-Sims) for membership in a
  // permutation group too large to enumerate.
  class StabilizerChain {
   public:
    StabilizerChain(std::vector<Perm> const& gens, std::size_t degree) : _degree(degree) {
      for (auto const& g : gens) {
        if (g.size() != degree || !is_permutation(g)) {
          throw DomainError("generator is not a permutation of the given degree");
        }
        Perm r = sift(g, 0);
        if (!persist::is_identity(r)) {
          extend(0, r);
        }
      }
    }

    std::size_t degree() const noexcept {
      return _degree;
    }

    bool contains(Perm const& p) const {
      if (p.size() != _degree) {
        return false;
      }
      return persist::is_identity(sift(p, 0));
    }

    Int order() const {
      Int n = 1;
      for (auto const& l : _levels) {
        n *= static_cast<unsigned long long>(l.orbit.size());
      }
      return n;
    }

    std::vector<std::uint32_t> base() const {
      std::vector<std::uint32_t> b;
      for (auto const& l : _levels) {
        b.push_back(l.point);
      }
      return b;
    }

   private:
    struct Level {
      std::uint32_t point;
      std::vector<Perm> gens;
      std::vector<std::uint32_t> orbit;
      std::vector<std::optional<Perm>> transversal;  // u_x with point^u_x = x
    };

    Perm sift(Perm g, std::size_t from) const {
      for (std::size_t i = from; i < _levels.size(); ++i) {
        auto const& l = _levels[i];
        auto const& u = l.transversal[g[l.point]];
        if (!u) {
          return g;
        }
        g = compose(g, persist::inverse(*u));
      }
      return g;
    }

    void test_schreier(std::size_t i, std::uint32_t x, Perm const& s) {
      auto const& l = _levels[i];
      Perm sg = compose(compose(*l.transversal[x], s), persist::inverse(*l.transversal[s[x]]));
      Perm r  = sift(sg, i + 1);
      if (!persist::is_identity(r)) {
        extend(i + 1, r);
      }
    }

    // g fixes the first i base points and is not in the current level-i group.
    void extend(std::size_t i, Perm const& g) {
      if (i == _levels.size()) {
        std::uint32_t moved = 0;
        while (g[moved] == moved) {
          ++moved;
        }
        Level l{moved, {}, {moved}, std::vector<std::optional<Perm>>(_degree)};
        l.transversal[moved] = identity_perm(_degree);
        _levels.push_back(std::move(l));
      }
      _levels[i].gens.push_back(g);
      std::size_t old = _levels[i].orbit.size();
      for (std::size_t k = 0; k < old; ++k) {
        std::uint32_t x = _levels[i].orbit[k];
        grow(i, x, g);
        test_schreier(i, x, g);
      }
      for (std::size_t k = old; k < _levels[i].orbit.size(); ++k) {
        std::uint32_t x = _levels[i].orbit[k];
        std::size_t ng  = _levels[i].gens.size();
        for (std::size_t j = 0; j < ng; ++j) {
          Perm s = _levels[i].gens[j];
          grow(i, x, s);
          test_schreier(i, x, s);
        }
      }
    }

    void grow(std::size_t i, std::uint32_t x, Perm const& s) {
      auto& l         = _levels[i];
      std::uint32_t y = s[x];
      if (!l.transversal[y]) {
        l.transversal[y] = compose(*l.transversal[x], s);
        l.orbit.push_back(y);
      }
    }

    std::size_t _degree;
    std::vector<Level> _levels;
  };

}  // namespace persist
