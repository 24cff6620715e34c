#pragma once

// Crystallographic model of the Promislow group: affine maps of R^3 whose
// linear part is one of the four sign-diagonal rotations and whose
// translation lies in (1/2) Z^3.  Also GF(2) group-ring arithmetic over it.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"

namespace persist {

  struct AffineElement {
    // Diagonal entries of the linear part, each +1 or -1, product +1.
    std::array<int, 3> sign{1, 1, 1};
    // Translation numerators over 2.
    std::array<long long, 3> twice{0, 0, 0};

    friend bool operator==(AffineElement const&, AffineElement const&) = default;
    friend auto operator<=>(AffineElement const&, AffineElement const&) = default;

    bool is_translation() const noexcept {
      return sign == std::array<int, 3>{1, 1, 1};
    }

    bool is_identity() const noexcept {
      return is_translation() && twice == std::array<long long, 3>{0, 0, 0};
    }

    // Index 0..3 of the linear part: I, diag(1,-1,-1), diag(-1,1,-1), diag(-1,-1,1).
    int point_class() const noexcept {
      if (sign[0] == 1 && sign[1] == 1) {
        return 0;
      }
      if (sign[0] == 1) {
        return 1;
      }
      if (sign[1] == 1) {
        return 2;
      }
      return 3;
    }
  };

  // (M, c)(M', c') = (M M', M c' + c)
  inline AffineElement affine_mult(AffineElement const& x, AffineElement const& y) {
    AffineElement r;
    for (std::size_t i = 0; i < 3; ++i) {
      r.sign[i]  = x.sign[i] * y.sign[i];
      r.twice[i] = x.sign[i] * y.twice[i] + x.twice[i];
    }
    return r;
  }

  inline AffineElement affine_invert(AffineElement const& x) {
    AffineElement r;
    for (std::size_t i = 0; i < 3; ++i) {
      r.sign[i]  = x.sign[i];
      r.twice[i] = -x.sign[i] * x.twice[i];
    }
    return r;
  }

  // (M, c) is already a unique representation.
  inline AffineElement canonical_form(AffineElement const& x) {
    return x;
  }

  inline bool valid_affine(AffineElement const& x) {
    for (int s : x.sign) {
      if (s != 1 && s != -1) {
        return false;
      }
    }
    return x.sign[0] * x.sign[1] * x.sign[2] == 1;
  }

  // `M:+-- t:1/2,1/2,0/2`
  inline std::string to_string(AffineElement const& x) {
    std::string out = "M:";
    for (int s : x.sign) {
      out += s > 0 ? '+' : '-';
    }
    out += " t:";
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != 0) {
        out += ',';
      }
      out += std::to_string(x.twice[i]) + "/2";
    }
    return out;
  }

  inline AffineElement parse_affine(std::string const& text) {
    std::istringstream is(text);
    std::string m, t;
    if (!(is >> m >> t) || m.size() != 5 || m.compare(0, 2, "M:") != 0
        || t.compare(0, 2, "t:") != 0) {
      throw ParseError("affine element must read 'M:+-- t:p/2,q/2,r/2': '" + text + "'");
    }
    std::string rest;
    if (is >> rest) {
      throw ParseError("trailing input in affine element '" + text + "'");
    }
    AffineElement x;
    for (std::size_t i = 0; i < 3; ++i) {
      char c = m[2 + i];
      if (c != '+' && c != '-') {
        throw ParseError("sign must be + or - in '" + text + "'");
      }
      x.sign[i] = c == '+' ? 1 : -1;
    }
    if (!valid_affine(x)) {
      throw ParseError("linear part must have determinant 1 in '" + text + "'");
    }
    std::string coords = t.substr(2);
    std::size_t pos    = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      std::size_t end = coords.find(',', pos);
      std::string c   = coords.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      pos             = end == std::string::npos ? coords.size() : end + 1;
      if ((end == std::string::npos) != (i == 2)) {
        throw ParseError("translation needs three coordinates in '" + text + "'");
      }
      bool half = c.size() > 2 && c.compare(c.size() - 2, 2, "/2") == 0;
      std::string num = half ? c.substr(0, c.size() - 2) : c;
      try {
        std::size_t used = 0;
        long long v      = std::stoll(num, &used);
        if (used != num.size()) {
          throw ParseError("bad coordinate");
        }
        x.twice[i] = half ? v : 2 * v;
      } catch (std::logic_error const&) {
        throw ParseError("bad coordinate '" + c + "' in '" + text + "'");
      }
    }
    return x;
  }

  struct AffineHash {
    std::size_t operator()(AffineElement const& x) const noexcept {
      std::size_t h = static_cast<std::size_t>(x.point_class());
      for (auto t : x.twice) {
        h = h * 1000003u ^ std::hash<long long>{}(t);
      }
      return h;
    }
  };

  class AffineGroup {
   public:
    using element_type = AffineElement;

    AffineElement identity() const {
      return {};
    }

    AffineElement mult(AffineElement const& x, AffineElement const& y) const {
      return affine_mult(x, y);
    }

    AffineElement invert(AffineElement const& x) const {
      return affine_invert(x);
    }

    bool is_identity(AffineElement const& x) const {
      return x.is_identity();
    }

    bool equal(AffineElement const& x, AffineElement const& y) const {
      return x == y;
    }

    std::size_t hash(AffineElement const& x) const {
      return AffineHash{}(x);
    }

    std::string print(AffineElement const& x) const {
      return to_string(x);
    }

    AffineElement parse(std::string const& text) const {
      return parse_affine(text);
    }
  };

  // Elements of word length <= radius in gens and their inverses, in
  // breadth-first order.
  inline std::vector<AffineElement> ball(std::vector<AffineElement> const& gens,
                                         std::size_t radius) {
    std::vector<AffineElement> letters;
    for (auto const& g : gens) {
      letters.push_back(g);
      letters.push_back(affine_invert(g));
    }
    std::vector<AffineElement> out{AffineElement{}};
    std::unordered_set<AffineElement, AffineHash> seen{out.front()};
    std::size_t begin = 0;
    for (std::size_t r = 0; r < radius; ++r) {
      std::size_t end = out.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (auto const& l : letters) {
          AffineElement e = affine_mult(out[i], l);
          if (seen.insert(e).second) {
            out.push_back(e);
          }
        }
      }
      begin = end;
    }
    return out;
  }

  struct PromislowModel {
    AffineElement x;
    AffineElement y;
  };

  // x = (diag(1,-1,-1), (1/2,1/2,0)), y = (diag(-1,1,-1), (0,1/2,1/2)).
  inline PromislowModel promislow_model() {
    PromislowModel m;
    m.x.sign  = {1, -1, -1};
    m.x.twice = {1, 1, 0};
    m.y.sign  = {-1, 1, -1};
    m.y.twice = {0, 1, 1};
    return m;
  }

  inline AffineElement affine_power(AffineElement const& x, long long k) {
    AffineElement base = k < 0 ? affine_invert(x) : x;
    AffineElement r;
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) {
      r = affine_mult(r, base);
    }
    return r;
  }

  // Integer determinant of three translation vectors (numerators over 2).
  inline long long det3(std::array<long long, 3> const& u,
                        std::array<long long, 3> const& v,
                        std::array<long long, 3> const& w) {
    return u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
           + u[2] * (v[0] * w[1] - v[1] * w[0]);
  }

  struct ModelChecks {
    bool relators_vanish       = false;
    bool xy_squared_nontrivial = false;
    bool lattice_rank3         = false;
    bool torsion_free_in_ball  = false;
    bool lattice_translations  = false;  // pure translations of the ball lie in the lattice
    std::size_t point_classes  = 0;
    std::size_t ball_size      = 0;
    std::vector<std::string> problems;

    bool ok() const noexcept {
      return relators_vanish && xy_squared_nontrivial && lattice_rank3 && torsion_free_in_ball
             && lattice_translations && point_classes == 4;
    }
  };

  // Structural checks of the model: relators, (xy)^2 != 1, the lattice
  // <x^2, y^2, (xy)^2> has rank 3, no torsion in the ball, and exactly four
  // point-part classes, each a single coset of the lattice.
  inline ModelChecks check_model(PromislowModel const& m, std::size_t radius) {
    ModelChecks c;
    auto const& x = m.x;
    auto const& y = m.y;
    auto X        = affine_invert(x);
    auto Y        = affine_invert(y);
    auto ev       = [](std::initializer_list<AffineElement> w) {
      AffineElement r;
      for (auto const& e : w) {
        r = affine_mult(r, e);
      }
      return r;
    };
    auto r1 = ev({X, y, y, x, y, y});
    auto r2 = ev({Y, x, x, y, x, x});
    c.relators_vanish = r1.is_identity() && r2.is_identity();
    if (!r1.is_identity()) {
      c.problems.push_back("x^-1 y^2 x y^2 = " + to_string(r1));
    }
    if (!r2.is_identity()) {
      c.problems.push_back("y^-1 x^2 y x^2 = " + to_string(r2));
    }
    auto xy2                 = affine_power(affine_mult(x, y), 2);
    c.xy_squared_nontrivial  = !xy2.is_identity();
    auto x2                  = affine_power(x, 2);
    auto y2                  = affine_power(y, 2);
    bool pure                = x2.is_translation() && y2.is_translation() && xy2.is_translation();
    long long det            = det3(x2.twice, y2.twice, xy2.twice);
    c.lattice_rank3          = pure && det != 0;
    // Lattice membership: integer combination of the three generators; with
    // numerators over 2 solve by Cramer's rule.
    auto in_lattice = [&](std::array<long long, 3> const& t) {
      if (det == 0) {
        return false;
      }
      long long a = det3(t, y2.twice, xy2.twice);
      long long b = det3(x2.twice, t, xy2.twice);
      long long d = det3(x2.twice, y2.twice, t);
      return a % det == 0 && b % det == 0 && d % det == 0;
    };
    auto elements = ball({x, y}, radius);
    c.ball_size   = elements.size();
    c.torsion_free_in_ball = true;
    c.lattice_translations = true;
    std::array<std::vector<std::array<long long, 3>>, 4> reps;
    for (auto const& e : elements) {
      int k = e.point_class();
      bool new_coset = true;
      for (auto const& r : reps[k]) {
        std::array<long long, 3> diff{e.twice[0] - r[0], e.twice[1] - r[1], e.twice[2] - r[2]};
        if (in_lattice(diff)) {
          new_coset = false;
          break;
        }
      }
      if (new_coset) {
        reps[k].push_back(e.twice);
      }
      if (e.is_identity()) {
        continue;
      }
      if (e.is_translation()) {
        if (!in_lattice(e.twice)) {
          c.lattice_translations = false;
          c.problems.push_back("translation outside lattice: " + to_string(e));
        }
      } else {
        auto sq = affine_mult(e, e);
        if (!sq.is_translation() || sq.is_identity()) {
          c.torsion_free_in_ball = false;
          c.problems.push_back("torsion candidate: " + to_string(e));
        }
      }
    }
    for (auto const& r : reps) {
      c.point_classes += r.empty() ? 0 : 1;
      if (r.size() > 1) {
        c.problems.push_back("point class with several lattice cosets");
        c.point_classes += 100;
      }
    }
    return c;
  }

  ////////////////////////////////////////////////////////////////////////
  // GF(2) group ring
  ////////////////////////////////////////////////////////////////////////

  class GroupRingElt {
   public:
    GroupRingElt() = default;

    static GroupRingElt single(AffineElement const& g) {
      GroupRingElt r;
      r._support.insert(g);
      return r;
    }

    static GroupRingElt one() {
      return single(AffineElement{});
    }

    // Adds 1 * g (mod 2).
    void toggle(AffineElement const& g) {
      auto [it, fresh] = _support.insert(g);
      if (!fresh) {
        _support.erase(it);
      }
    }

    std::unordered_set<AffineElement, AffineHash> const& support() const noexcept {
      return _support;
    }

    std::vector<AffineElement> sorted_support() const {
      std::vector<AffineElement> out(_support.begin(), _support.end());
      std::sort(out.begin(), out.end());
      return out;
    }

    friend bool operator==(GroupRingElt const& p, GroupRingElt const& q) {
      return p._support == q._support;
    }

    friend GroupRingElt operator+(GroupRingElt p, GroupRingElt const& q) {
      for (auto const& g : q._support) {
        p.toggle(g);
      }
      return p;
    }

   private:
    std::unordered_set<AffineElement, AffineHash> _support;
  };

  inline GroupRingElt ring_mult(GroupRingElt const& p, GroupRingElt const& q) {
    GroupRingElt r;
    for (auto const& g : p.support()) {
      for (auto const& h : q.support()) {
        r.toggle(affine_mult(g, h));
      }
    }
    return r;
  }

  inline bool is_unit_pair(GroupRingElt const& p, GroupRingElt const& q) {
    auto one = GroupRingElt::one();
    return ring_mult(p, q) == one && ring_mult(q, p) == one;
  }

  // Lines `coeff; M:+-- t:p/2,q/2,r/2`; coefficients are read mod 2, blank
  // lines and lines starting with # are skipped.
  inline GroupRingElt parse_group_ring(std::string const& text) {
    GroupRingElt r;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') {
        continue;
      }
      auto semi = line.find(';');
      if (semi == std::string::npos) {
        throw ParseError("group ring line " + std::to_string(lineno) + " lacks ';'");
      }
      long long coeff = 0;
      try {
        coeff = std::stoll(line.substr(0, semi));
      } catch (std::logic_error const&) {
        throw ParseError("bad coefficient on group ring line " + std::to_string(lineno));
      }
      AffineElement g = parse_affine(line.substr(semi + 1));
      if (coeff % 2 != 0) {
        r.toggle(g);
      }
    }
    return r;
  }

  inline std::string to_string(GroupRingElt const& p) {
    std::string out;
    for (auto const& g : p.sorted_support()) {
      out += "1; " + to_string(g) + "\n";
    }
    return out;
  }

}  // namespace persist
