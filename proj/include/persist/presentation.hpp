#pragma once

// Finite presentations, their abelianizations via Smith normal form, doubles
// of presentations along a subgroup, and homomorphism checks.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "integer.hpp"

namespace persist {

  // Freely reduced word over generator indices.
  using Relator = std::vector<std::pair<std::size_t, long long>>;

  inline void relator_append(Relator& r, std::size_t gen, long long e) {
    if (e == 0) {
      return;
    }
    if (!r.empty() && r.back().first == gen) {
      r.back().second += e;
      if (r.back().second == 0) {
        r.pop_back();
      }
    } else {
      r.emplace_back(gen, e);
    }
  }

  inline Relator relator_inverse(Relator const& r) {
    Relator out;
    for (auto it = r.rbegin(); it != r.rend(); ++it) {
      out.emplace_back(it->first, -it->second);
    }
    return out;
  }

  inline Relator relator_concat(Relator a, Relator const& b) {
    for (auto const& [g, e] : b) {
      relator_append(a, g, e);
    }
    return a;
  }

  struct Presentation {
    std::vector<std::string> gens;
    std::vector<Relator> rels;

    std::size_t index_of(std::string const& name) const {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i] == name) {
          return i;
        }
      }
      throw ParseError("unknown generator '" + name + "'");
    }

    // Tokens are generator names, a leading capital marking the inverse
    // (X = x^-1, Ubar = ubar^-1), optionally followed by ^n.  With
    // single-letter generators tokens may also run together (Xyyxyy).
    Relator parse_word(std::string const& text) const {
      Relator r;
      std::istringstream is(text);
      std::string tok;
      bool single = std::all_of(gens.begin(), gens.end(),
                                [](std::string const& g) { return g.size() == 1; });
      while (is >> tok) {
        long long e = 1;
        auto caret  = tok.find('^');
        std::string name = tok.substr(0, caret);
        if (caret != std::string::npos) {
          try {
            std::size_t used = 0;
            e                = std::stoll(tok.substr(caret + 1), &used);
            if (used != tok.size() - caret - 1) {
              throw ParseError("bad exponent");
            }
          } catch (std::logic_error const&) {
            throw ParseError("bad exponent in token '" + tok + "'");
          }
        }
        auto lookup = [&](std::string const& n, long long& sign) -> std::size_t {
          for (std::size_t i = 0; i < gens.size(); ++i) {
            if (gens[i] == n) {
              sign = 1;
              return i;
            }
          }
          if (!n.empty() && std::isupper(static_cast<unsigned char>(n[0]))) {
            std::string low = n;
            low[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(low[0])));
            for (std::size_t i = 0; i < gens.size(); ++i) {
              if (gens[i] == low) {
                sign = -1;
                return i;
              }
            }
          }
          return gens.size();
        };
        long long sign = 1;
        std::size_t g  = lookup(name, sign);
        if (g < gens.size()) {
          relator_append(r, g, sign * e);
          continue;
        }
        if (!single || name.size() < 2) {
          throw ParseError("unknown generator token '" + tok + "'");
        }
        for (std::size_t k = 0; k < name.size(); ++k) {
          g = lookup(name.substr(k, 1), sign);
          if (g == gens.size()) {
            throw ParseError("unknown generator token '" + tok + "'");
          }
          relator_append(r, g, sign * (k + 1 == name.size() ? e : 1));
        }
      }
      return r;
    }

    std::string print_word(Relator const& r) const {
      std::string out;
      for (auto const& [g, e] : r) {
        std::string name = gens[g];
        if (e < 0) {
          name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        }
        long long n = e < 0 ? -e : e;
        for (long long k = 0; k < n; ++k) {
          if (!out.empty()) {
            out += ' ';
          }
          out += name;
        }
      }
      return out.empty() ? "1" : out;
    }
  };

  // `gens: x y` then one `rel: ...` line per relator.
  inline Presentation parse_presentation(std::string const& text) {
    Presentation p;
    std::istringstream is(text);
    std::string line;
    bool have_gens = false;
    std::vector<std::string> rel_lines;
    while (std::getline(is, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') {
        continue;
      }
      line = line.substr(first);
      if (line.compare(0, 5, "gens:") == 0) {
        if (have_gens) {
          throw ParseError("duplicate gens line");
        }
        have_gens = true;
        std::istringstream gs(line.substr(5));
        std::string g;
        while (gs >> g) {
          if (!std::islower(static_cast<unsigned char>(g[0]))) {
            throw ParseError("generator names must start with a lowercase letter: '" + g + "'");
          }
          if (std::find(p.gens.begin(), p.gens.end(), g) != p.gens.end()) {
            throw ParseError("duplicate generator '" + g + "'");
          }
          p.gens.push_back(g);
        }
      } else if (line.compare(0, 4, "rel:") == 0) {
        rel_lines.push_back(line.substr(4));
      } else {
        throw ParseError("presentation lines must start with 'gens:' or 'rel:': '" + line + "'");
      }
    }
    if (!have_gens) {
      throw ParseError("presentation lacks a gens line");
    }
    for (auto const& r : rel_lines) {
      p.rels.push_back(p.parse_word(r));
    }
    return p;
  }

  inline std::string to_string(Presentation const& p) {
    std::string out = "gens:";
    for (auto const& g : p.gens) {
      out += ' ' + g;
    }
    out += '\n';
    for (auto const& r : p.rels) {
      out += "rel: " + p.print_word(r) + '\n';
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Smith normal form
  ////////////////////////////////////////////////////////////////////////

  using IntMatrix = std::vector<std::vector<Int>>;

  // Rows are relators, columns generators, entries exponent sums.
  inline IntMatrix relation_matrix(Presentation const& p) {
    IntMatrix m(p.rels.size(), std::vector<Int>(p.gens.size(), 0));
    for (std::size_t i = 0; i < p.rels.size(); ++i) {
      for (auto const& [g, e] : p.rels[i]) {
        m[i][g] += e;
      }
    }
    return m;
  }

  // Diagonal of the Smith normal form: d_1 | d_2 | ... , non-negative, of
  // length min(rows, cols).
  inline std::vector<Int> smith_diagonal(IntMatrix a) {
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::size_t n    = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
      for (;;) {
        // Pivot: smallest nonzero |entry| in the trailing block.
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i) {
          for (std::size_t j = t; j < cols; ++j) {
            if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
              pi = i;
              pj = j;
            }
          }
        }
        if (pi == rows) {
          std::vector<Int> d;
          for (std::size_t k = 0; k < n; ++k) {
            d.push_back(abs(a[k][k]));
          }
          return d;
        }
        std::swap(a[t], a[pi]);
        for (auto& row : a) {
          std::swap(row[t], row[pj]);
        }
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
          Int q = a[i][t] / a[t][t];
          for (std::size_t j = t; j < cols; ++j) {
            a[i][j] -= q * a[t][j];
          }
          clean = clean && a[i][t] == 0;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          Int q = a[t][j] / a[t][t];
          for (std::size_t i = t; i < rows; ++i) {
            a[i][j] -= q * a[i][t];
          }
          clean = clean && a[t][j] == 0;
        }
        if (!clean) {
          continue;
        }
        // Divisibility of the trailing block by the pivot.
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i) {
          for (std::size_t j = t + 1; j < cols; ++j) {
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t k = t; k < cols; ++k) {
                a[t][k] += a[i][k];
              }
              divides = false;
              break;
            }
          }
        }
        if (divides) {
          break;
        }
      }
    }
    std::vector<Int> d;
    for (std::size_t k = 0; k < n; ++k) {
      d.push_back(abs(a[k][k]));
    }
    return d;
  }

  namespace detail {

    // Fraction-free (Bareiss) determinant.
    inline Int determinant(IntMatrix m) {
      std::size_t n = m.size();
      if (n == 0) {
        return 1;
      }
      Int sign = 1, prev = 1;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
          std::size_t r = k + 1;
          while (r < n && m[r][k] == 0) {
            ++r;
          }
          if (r == n) {
            return 0;
          }
          std::swap(m[k], m[r]);
          sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
          for (std::size_t j = k + 1; j < n; ++j) {
            m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
          }
        }
        prev = m[k][k];
      }
      return sign * m[n - 1][n - 1];
    }

    inline void subsets(std::size_t n, std::size_t k, std::size_t start,
                        std::vector<std::size_t>& cur,
                        std::vector<std::vector<std::size_t>>& out) {
      if (cur.size() == k) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
      }
    }

  }  // namespace detail

  // Independent route: d_k = gcd of the k x k minors, s_k = d_k / d_{k-1}.
  inline std::vector<Int> smith_diagonal_by_minors(IntMatrix const& a,
                                                   std::size_t max_minors = 2'000'000) {
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::size_t n    = std::min(rows, cols);
    std::vector<Int> s;
    Int prev = 1;
    std::size_t visited = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::vector<std::size_t>> rs, cs;
      std::vector<std::size_t> cur;
      detail::subsets(rows, k, 0, cur, rs);
      detail::subsets(cols, k, 0, cur, cs);
      visited += rs.size() * cs.size();
      if (visited > max_minors) {
        throw CapExceeded("too many minors for the determinantal-divisor route");
      }
      Int g = 0;
      for (auto const& r : rs) {
        for (auto const& c : cs) {
          IntMatrix m(k, std::vector<Int>(k));
          for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
              m[i][j] = a[r[i]][c[j]];
            }
          }
          g = boost::multiprecision::gcd(g, abs(detail::determinant(m)));
        }
      }
      if (g == 0) {
        for (; k <= n; ++k) {
          s.push_back(0);
        }
        break;
      }
      s.push_back(g / prev);
      prev = g;
    }
    return s;
  }

  struct Abelianization {
    std::size_t rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1

    friend bool operator==(Abelianization const&, Abelianization const&) = default;

    nlohmann::json to_json() const {
      nlohmann::json t = nlohmann::json::array();
      for (auto const& x : torsion) {
        if (x <= Int(std::numeric_limits<long long>::max())) {
          t.push_back(static_cast<long long>(x));
        } else {
          t.push_back(x.str());
        }
      }
      return {{"torsion", t}, {"rank", rank}};
    }

    std::string describe() const {
      std::string out;
      if (rank > 0) {
        out = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
      }
      for (auto const& t : torsion) {
        out += (out.empty() ? "" : " + ") + ("Z/" + t.str());
      }
      return out.empty() ? "0" : out;
    }
  };

  inline Abelianization abelianization_from_diagonal(std::size_t num_gens,
                                                     std::vector<Int> const& diag) {
    Abelianization ab;
    std::size_t nonzero = 0;
    for (auto const& d : diag) {
      if (d != 0) {
        ++nonzero;
        if (d != 1) {
          ab.torsion.push_back(d);
        }
      }
    }
    ab.rank = num_gens - nonzero;
    return ab;
  }

  inline Abelianization abelianization(Presentation const& p) {
    return abelianization_from_diagonal(p.gens.size(), smith_diagonal(relation_matrix(p)));
  }

  inline Abelianization abelianization_by_minors(Presentation const& p) {
    return abelianization_from_diagonal(p.gens.size(),
                                        smith_diagonal_by_minors(relation_matrix(p)));
  }

  ////////////////////////////////////////////////////////////////////////
  // Doubles of presentations
  ////////////////////////////////////////////////////////////////////////

  enum class GluingKind { canonical, swap, images };

  // K *_T Kbar: generators of K then their copies (name + "bar"); relators
  // of K, their copies, and t = phi(t) for each subgroup generator t, where
  // phi(t) is the copy of t (canonical), the copy of the other generator
  // (swap, two subgroup generators), or an explicit word over the copies.
  inline Presentation double_presentation(Presentation const& k,
                                          std::vector<Relator> const& subgroup,
                                          GluingKind kind,
                                          std::vector<Relator> const& images = {}) {
    Presentation d;
    std::size_t n = k.gens.size();
    d.gens        = k.gens;
    for (auto const& g : k.gens) {
      d.gens.push_back(g + "bar");
    }
    auto bar = [n](Relator const& r) {
      Relator out;
      for (auto const& [g, e] : r) {
        relator_append(out, g + n, e);
      }
      return out;
    };
    d.rels = k.rels;
    for (auto const& r : k.rels) {
      d.rels.push_back(bar(r));
    }
    for (std::size_t i = 0; i < subgroup.size(); ++i) {
      Relator image;
      switch (kind) {
        case GluingKind::canonical:
          image = bar(subgroup[i]);
          break;
        case GluingKind::swap:
          if (subgroup.size() != 2) {
            throw DomainError("swap gluing needs exactly two subgroup generators");
          }
          image = bar(subgroup[1 - i]);
          break;
        case GluingKind::images:
          if (images.size() != subgroup.size()) {
            throw DomainError("gluing images must cover every subgroup generator");
          }
          for (auto const& [g, e] : images[i]) {
            if (g >= 2 * n) {
              throw DomainError("gluing image uses an unknown generator");
            }
          }
          image = images[i];
          break;
      }
      d.rels.push_back(relator_concat(subgroup[i], relator_inverse(image)));
    }
    return d;
  }

  // Does x -> images[x] define a homomorphism to the oracle's group?
  template <class O>
  typename O::element_type evaluate(Presentation const& p,
                                    Relator const& r,
                                    std::vector<typename O::element_type> const& images,
                                    O const& group) {
    auto acc = group.identity();
    for (auto const& [g, e] : r) {
      auto x = e < 0 ? group.invert(images.at(g)) : images.at(g);
      for (long long k = 0; k < (e < 0 ? -e : e); ++k) {
        acc = group.mult(acc, x);
      }
    }
    (void) p;
    return acc;
  }

  template <class O>
  bool hom_check(Presentation const& p,
                 std::vector<typename O::element_type> const& images,
                 O const& group,
                 std::string* failure = nullptr) {
    if (images.size() != p.gens.size()) {
      throw DomainError("hom_check needs one image per generator");
    }
    for (auto const& r : p.rels) {
      if (!group.is_identity(evaluate(p, r, images, group))) {
        if (failure != nullptr) {
          *failure = p.print_word(r);
        }
        return false;
      }
    }
    return true;
  }

  inline Presentation promislow_presentation() {
    return parse_presentation("gens: x y\nrel: X y y x y y\nrel: Y x x y x x\n");
  }

  inline Presentation klein_presentation() {
    return parse_presentation("gens: u v\nrel: u u V V\n");
  }

}  // namespace persist
