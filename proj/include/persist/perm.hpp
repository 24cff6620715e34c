#pragma once

// Permutations of {0, ..., m-1} stored as image arrays, and finite
// permutation groups given by generators.
//
// Composition follows the right action used for graph paths: (p * q)[i] is
// q[p[i]], i.e. first p then q, so the permutation of a word u v is the
// permutation of u followed by that of v.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"

namespace persist {

  using Perm = std::vector<std::uint32_t>;

  inline Perm identity_perm(std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0u);
    return p;
  }

  inline bool is_identity(Perm const& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] != i) {
        return false;
      }
    }
    return true;
  }

  inline bool is_permutation(Perm const& p) {
    std::vector<bool> seen(p.size(), false);
    for (auto x : p) {
      if (x >= p.size() || seen[x]) {
        return false;
      }
      seen[x] = true;
    }
    return true;
  }

  // first p, then q
  inline Perm compose(Perm const& p, Perm const& q) {
    Perm r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      r[i] = q[p[i]];
    }
    return r;
  }

  inline Perm inverse(Perm const& p) {
    Perm r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      r[p[i]] = static_cast<std::uint32_t>(i);
    }
    return r;
  }

  inline std::size_t order(Perm const& p) {
    std::vector<bool> seen(p.size(), false);
    std::size_t result = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (seen[i]) {
        continue;
      }
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = p[j]) {
        seen[j] = true;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  inline Perm power(Perm const& p, Int k) {
    Int o = static_cast<unsigned long long>(order(p));
    k = mod(k, o);
    Perm result = identity_perm(p.size());
    Perm base = p;
    while (k > 0) {
      if ((k & 1) != 0) {
        result = compose(result, base);
      }
      k >>= 1;
      if (k > 0) {
        base = compose(base, base);
      }
    }
    return result;
  }

  struct PermHash {
    std::size_t operator()(Perm const& p) const noexcept {
      std::size_t h = p.size();
      for (auto x : p) {
        h = h * 1000003u ^ x;
      }
      return h;
    }
  };

  using PermSet = std::unordered_set<Perm, PermHash>;

  // The subgroup generated by gens inside Sym(n), by closure under right
  // multiplication by generators (sufficient in a finite group).
  inline std::vector<Perm> closure(std::vector<Perm> const& gens,
                                   std::size_t n,
                                   std::size_t limit = 1u << 22) {
    std::vector<Perm> elements{identity_perm(n)};
    PermSet seen{elements.front()};
    for (std::size_t i = 0; i < elements.size(); ++i) {
      for (auto const& g : gens) {
        Perm next = compose(elements[i], g);
        if (seen.insert(next).second) {
          elements.push_back(std::move(next));
          if (elements.size() > limit) {
            throw CapExceeded("permutation group closure exceeds "
                              + std::to_string(limit) + " elements");
          }
        }
      }
    }
    std::sort(elements.begin(), elements.end());
    return elements;
  }

  // Finite permutation group as a group oracle; elements are permutations of
  // a fixed degree.
  class PermGroup {
   public:
    using element_type = Perm;

    explicit PermGroup(std::size_t degree) : _degree(degree) {}

    std::size_t degree() const noexcept {
      return _degree;
    }

    Perm identity() const {
      return identity_perm(_degree);
    }

    Perm mult(Perm const& x, Perm const& y) const {
      return compose(x, y);
    }

    Perm invert(Perm const& x) const {
      return persist::inverse(x);
    }

    bool is_identity(Perm const& x) const {
      return persist::is_identity(x);
    }

    bool equal(Perm const& x, Perm const& y) const {
      return x == y;
    }

    std::size_t hash(Perm const& x) const {
      return PermHash{}(x);
    }

    std::string print(Perm const& x) const {
      std::string s = "[";
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i != 0) {
          s += ',';
        }
        s += std::to_string(x[i]);
      }
      return s + "]";
    }

    Perm parse(std::string const& text) const {
      Perm p;
      std::size_t i = 0;
      auto skip = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '['
                                   || text[i] == ']')) {
          ++i;
        }
      };
      skip();
      while (i < text.size()) {
        std::size_t start = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          ++i;
        }
        if (start == i) {
          throw ParseError("bad permutation '" + text + "'");
        }
        p.push_back(static_cast<std::uint32_t>(std::stoul(text.substr(start, i - start))));
        skip();
      }
      if (p.size() != _degree || !is_permutation(p)) {
        throw ParseError("not a permutation of degree " + std::to_string(_degree) + ": '"
                         + text + "'");
      }
      return p;
    }

   private:
    std::size_t _degree;
  };

}  // namespace persist
