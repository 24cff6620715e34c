#pragma once

// Amalgamated products A *_C Abar with exact normal forms.
//
// The engine is parameterized by an oracle O that is a group oracle for the
// factor (see groups.hpp) and in addition provides
//
//   sub_member(side, x)   x lies in the copy of C inside the factor `side`
//   transfer(side, x)     for x in C on `side`, its image on the other side
//
// Normal form: sides alternate and no syllable lies in C, except that a
// single syllable may be a C-element; such lone elements are kept on side L.
// Amalgam<O> is itself a group oracle, so amalgams nest (doubles of doubles).

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <json.hpp>

#include "errors.hpp"
#include "integer.hpp"

namespace persist {

  enum class Side : std::uint8_t { L = 0, R = 1 };

  inline constexpr Side other(Side s) noexcept {
    return s == Side::L ? Side::R : Side::L;
  }

  inline constexpr char side_char(Side s) noexcept {
    return s == Side::L ? 'L' : 'R';
  }

  template <class E>
  struct AmalgamSyllable {
    Side side;
    E elt;
  };

  template <class E>
  class AmalgamElement {
   public:
    using syllable_type  = AmalgamSyllable<E>;
    using container_type = boost::container::small_vector<syllable_type, 4>;

    AmalgamElement() = default;

    std::span<syllable_type const> syllables() const noexcept {
      return {_syl.data(), _syl.size()};
    }

    std::size_t syllable_length() const noexcept {
      return _syl.size();
    }

    bool empty() const noexcept {
      return _syl.empty();
    }

    syllable_type const& operator[](std::size_t i) const noexcept {
      return _syl[i];
    }

   private:
    template <class O>
    friend class Amalgam;

    container_type _syl;
  };

  template <class O>
  class Amalgam {
   public:
    using factor_type  = typename O::element_type;
    using element_type = AmalgamElement<factor_type>;
    using syllable     = AmalgamSyllable<factor_type>;

    explicit Amalgam(O oracle) : _o(std::move(oracle)) {}

    O const& oracle() const noexcept {
      return _o;
    }

    element_type identity() const {
      return {};
    }

    // Element with one syllable; reduces (C-elements move to side L).
    element_type make(Side s, factor_type x) const {
      element_type e;
      push(e, s, std::move(x));
      return e;
    }

    element_type reduce(std::span<syllable const> raw) const {
      element_type e;
      for (auto const& s : raw) {
        push(e, s.side, s.elt);
      }
      return e;
    }

    element_type reduce(std::initializer_list<syllable> raw) const {
      return reduce(std::span<syllable const>(raw.begin(), raw.size()));
    }

    // Reduction in the opposite pinch order: from the right.
    element_type reduce_from_right(std::span<syllable const> raw) const {
      element_type e;
      for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
        push(e, it->side, _o.invert(it->elt));
      }
      return invert(e);
    }

    element_type mult(element_type const& x, element_type const& y) const {
      element_type r = x;
      for (auto const& s : y._syl) {
        push(r, s.side, s.elt);
      }
      return r;
    }

    element_type invert(element_type const& x) const {
      element_type r;
      r._syl.reserve(x._syl.size());
      for (auto it = x._syl.rbegin(); it != x._syl.rend(); ++it) {
        r._syl.push_back({it->side, _o.invert(it->elt)});
      }
      return r;
    }

    element_type pow(element_type const& x, Int k) const {
      element_type base = k < 0 ? invert(x) : x;
      k                 = persist::abs(k);
      element_type acc;
      while (k > 0) {
        if ((k & 1) != 0) {
          acc = mult(acc, base);
        }
        k >>= 1;
        if (k > 0) {
          base = mult(base, base);
        }
      }
      return acc;
    }

    bool is_identity(element_type const& x) const {
      return x._syl.empty();
    }

    // The syllable length of a normal form is an invariant of the element, so
    // differing lengths decide inequality without reducing.
    bool equal(element_type const& x, element_type const& y) const {
      if (x._syl.size() != y._syl.size()) {
        return false;
      }
      if (x._syl.empty()) {
        return true;
      }
      if (x._syl.front().side != y._syl.front().side) {
        return false;
      }
      return is_identity(mult(x, invert(y)));
    }

    std::size_t syllable_length(element_type const& x) const noexcept {
      return x._syl.size();
    }

    // Compatible with equal(): only normal-form invariants are hashed.
    std::size_t hash(element_type const& x) const noexcept {
      std::size_t h = x._syl.size() * 2;
      if (!x._syl.empty()) {
        h += static_cast<std::size_t>(x._syl.front().side);
      }
      return h;
    }

    // `(L e)(R e)...`, `1` for the identity.
    std::string print(element_type const& x) const {
      if (x._syl.empty()) {
        return "1";
      }
      std::string out;
      for (auto const& s : x._syl) {
        out += '(';
        out += side_char(s.side);
        out += ' ';
        out += _o.print(s.elt);
        out += ')';
      }
      return out;
    }

    element_type parse(std::string const& text) const {
      std::size_t i = 0;
      auto skip_ws  = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
          ++i;
        }
      };
      skip_ws();
      if (i < text.size() && text[i] == '1') {
        ++i;
        skip_ws();
        if (i != text.size()) {
          throw ParseError("trailing input after identity in '" + text + "'");
        }
        return {};
      }
      std::vector<syllable> raw;
      while (i < text.size()) {
        if (text[i] != '(') {
          throw ParseError("expected '(' in element '" + text + "'");
        }
        ++i;
        skip_ws();
        if (i >= text.size() || (text[i] != 'L' && text[i] != 'R')) {
          throw ParseError("expected side L or R in element '" + text + "'");
        }
        Side s = text[i] == 'L' ? Side::L : Side::R;
        ++i;
        std::size_t start = i;
        int depth         = 1;
        while (i < text.size() && depth > 0) {
          if (text[i] == '(') {
            ++depth;
          } else if (text[i] == ')') {
            --depth;
          }
          ++i;
        }
        if (depth != 0) {
          throw ParseError("unbalanced parentheses in element '" + text + "'");
        }
        raw.push_back({s, _o.parse(text.substr(start, i - 1 - start))});
        skip_ws();
      }
      if (raw.empty()) {
        throw ParseError("empty element");
      }
      return reduce(raw);
    }

    nlohmann::json to_json(element_type const& x) const {
      nlohmann::json j = nlohmann::json::array();
      for (auto const& s : x._syl) {
        nlohmann::json elt;
        if constexpr (requires { _o.to_json(s.elt); }) {
          elt = _o.to_json(s.elt);
        } else {
          elt = _o.print(s.elt);
        }
        j.push_back({{"side", std::string(1, side_char(s.side))}, {"elt", elt}});
      }
      return j;
    }

    element_type from_json(nlohmann::json const& j) const {
      if (!j.is_array()) {
        throw ParseError("amalgam element JSON must be an array");
      }
      std::vector<syllable> raw;
      for (auto const& s : j) {
        std::string side = s.at("side").get<std::string>();
        if (side != "L" && side != "R") {
          throw ParseError("bad side '" + side + "'");
        }
        factor_type x;
        if constexpr (requires { _o.from_json(s.at("elt")); }) {
          x = _o.from_json(s.at("elt"));
        } else {
          x = _o.parse(s.at("elt").template get<std::string>());
        }
        raw.push_back({side == "L" ? Side::L : Side::R, std::move(x)});
      }
      return reduce(raw);
    }

   private:
    // Right-multiplies e by the syllable (s, x), restoring normal form.
    void push(element_type& e, Side s, factor_type x) const {
      auto& st = e._syl;
      for (;;) {
        if (_o.is_identity(x)) {
          return;
        }
        if (st.empty()) {
          if (s == Side::R && _o.sub_member(Side::R, x)) {
            x = _o.transfer(Side::R, x);
            s = Side::L;
          }
          st.push_back({s, std::move(x)});
          return;
        }
        if (st.back().side == s) {
          x = _o.mult(st.back().elt, x);
          st.pop_back();
          continue;
        }
        if (_o.sub_member(s, x)) {
          x = _o.transfer(s, x);
          s = other(s);
          continue;
        }
        if (st.size() == 1 && _o.sub_member(st.back().side, st.back().elt)) {
          factor_type c = _o.transfer(st.back().side, st.back().elt);
          st.pop_back();
          x = _o.mult(c, x);
          continue;
        }
        st.push_back({s, std::move(x)});
        return;
      }
    }

    O _o;
  };

  ////////////////////////////////////////////////////////////////////////
  // Doubles along a subgroup given by a membership predicate
  ////////////////////////////////////////////////////////////////////////

  // G *_C Gbar with both copies of C given by the same predicate.  The
  // gluing is the canonical one unless a transfer map is supplied; a supplied
  // map must be an automorphism of C, given on side L (the R side uses its
  // inverse).
  template <class Factor>
  class SubgroupDouble {
   public:
    using element_type = typename Factor::element_type;
    using Member       = std::function<bool(element_type const&)>;
    using Map          = std::function<element_type(element_type const&)>;

    SubgroupDouble(Factor factor, Member member)
        : _f(std::move(factor)), _member(std::move(member)) {}

    SubgroupDouble(Factor factor, Member member, Map forward, Map backward)
        : _f(std::move(factor)),
          _member(std::move(member)),
          _forward(std::move(forward)),
          _backward(std::move(backward)) {}

    Factor const& factor() const noexcept {
      return _f;
    }

    bool canonical() const noexcept {
      return !_forward;
    }

    element_type identity() const {
      return _f.identity();
    }

    element_type mult(element_type const& x, element_type const& y) const {
      return _f.mult(x, y);
    }

    element_type invert(element_type const& x) const {
      return _f.invert(x);
    }

    bool is_identity(element_type const& x) const {
      return _f.is_identity(x);
    }

    bool equal(element_type const& x, element_type const& y) const {
      return _f.equal(x, y);
    }

    std::size_t hash(element_type const& x) const {
      return _f.hash(x);
    }

    std::string print(element_type const& x) const {
      return _f.print(x);
    }

    element_type parse(std::string const& text) const {
      return _f.parse(text);
    }

    auto to_json(element_type const& x) const
      requires requires(Factor const& f, element_type const& e) { f.to_json(e); }
    {
      return _f.to_json(x);
    }

    element_type from_json(nlohmann::json const& j) const
      requires requires(Factor const& f, nlohmann::json const& v) { f.from_json(v); }
    {
      return _f.from_json(j);
    }

    bool sub_member(Side, element_type const& x) const {
      return _member(x);
    }

    element_type transfer(Side s, element_type const& x) const {
      if (!_forward) {
        return x;
      }
      return s == Side::L ? _forward(x) : _backward(x);
    }

   private:
    Factor _f;
    Member _member;
    Map _forward;
    Map _backward;
  };

  template <class Factor>
  Amalgam<SubgroupDouble<Factor>> make_double(Factor factor,
                                              typename SubgroupDouble<Factor>::Member member) {
    return Amalgam<SubgroupDouble<Factor>>(
        SubgroupDouble<Factor>(std::move(factor), std::move(member)));
  }

  ////////////////////////////////////////////////////////////////////////
  // Translations in a double of an index-2 pair
  ////////////////////////////////////////////////////////////////////////

  // Inside an ambient double G = F *_N Fbar, the subgroup L = H *_N Hbar for
  // N of index 2 in H acts on its Bass-Serre line: elements with an even
  // number of non-N syllables translate, the others reflect.  With
  // ell = h hbar^-1 (h in H - N) the translations form N x <ell>, which is
  // also the centralizer of ell in G.
  template <class O>
  class TranslationToolkit {
   public:
    using Engine  = Amalgam<O>;
    using factor  = typename Engine::factor_type;
    using element = typename Engine::element_type;
    using Member  = std::function<bool(factor const&)>;

    TranslationToolkit(Engine const& engine, Member in_H, factor h)
        : _g(engine), _in_H(std::move(in_H)), _h(std::move(h)) {
      if (!_in_H(_h) || _g.oracle().sub_member(Side::L, _h)) {
        throw DomainError("ell needs h in H - N");
      }
      _ell = _g.mult(_g.make(Side::L, _h), _g.make(Side::R, _g.oracle().invert(_h)));
    }

    Engine const& engine() const noexcept {
      return _g;
    }

    element const& ell() const noexcept {
      return _ell;
    }

    factor const& h() const noexcept {
      return _h;
    }

    bool in_L(element const& x) const {
      for (auto const& s : x.syllables()) {
        if (!_in_H(s.elt)) {
          return false;
        }
      }
      return true;
    }

    // Number of syllables outside N.  Normal forms only have a lone N-syllable.
    std::size_t non_N_count(element const& x) const {
      if (x.syllable_length() == 1 && _g.oracle().sub_member(x[0].side, x[0].elt)) {
        return 0;
      }
      return x.syllable_length();
    }

    bool is_translation(element const& x) const {
      return in_L(x) && non_N_count(x) % 2 == 0;
    }

    struct Decomposition {
      factor n;
      Int q;
    };

    // x = n ell^q with n in N.
    Decomposition decompose(element const& x) const {
      if (!in_L(x)) {
        throw DomainError("decompose: " + _g.print(x) + " has a syllable outside H");
      }
      std::size_t c = non_N_count(x);
      if (c % 2 != 0) {
        throw DomainError("decompose: " + _g.print(x) + " is a reflection ("
                          + std::to_string(c) + " non-N syllables)");
      }
      Int q = static_cast<unsigned long long>(c / 2);
      if (c > 0 && x[0].side == Side::R) {
        q = -q;
      }
      element n = _g.mult(x, _g.pow(_ell, -q));
      if (n.syllable_length() > 1
          || (n.syllable_length() == 1 && !_g.oracle().sub_member(n[0].side, n[0].elt))) {
        throw DomainError("decompose: residual " + _g.print(n) + " of " + _g.print(x)
                          + " is not in N");
      }
      return {n.empty() ? _g.oracle().identity() : n[0].elt, q};
    }

    element compose(factor const& n, Int const& q) const {
      return _g.mult(_g.make(Side::L, n), _g.pow(_ell, q));
    }

    // g in N x <ell>, equivalently g centralizes ell.
    bool centralizer_member(element const& g) const {
      return is_translation(g);
    }

   private:
    Engine _g;
    Member _in_H;
    factor _h;
    element _ell;
  };

  ////////////////////////////////////////////////////////////////////////
  // Injection of doubles
  ////////////////////////////////////////////////////////////////////////

  struct InjectionReport {
    std::size_t samples            = 0;
    std::size_t violations         = 0;
    std::size_t hypothesis_failures = 0;
    std::vector<std::string> violation_examples;
    std::vector<std::string> hypothesis_examples;

    bool ok() const noexcept {
      return violations == 0 && hypothesis_failures == 0;
    }
  };

  // A *_C Abar -> B *_D Bbar for A a subgroup of B, with A, C presented by a
  // sampler of A-elements (as B-elements) and a membership predicate for C.
  // The outer oracle's sub_member is D.  For each sample the hypothesis
  // C = A cap D is probed on the drawn A-elements, then a random inner normal
  // form (syllables in A - C, alternating) is mapped into the outer double;
  // a violation is an image whose outer normal form is shorter.
  template <class O, class Rng>
  InjectionReport injection_suite(
      Amalgam<O> const& outer,
      std::function<typename O::element_type(Rng&)> const& sample_A,
      std::function<bool(typename O::element_type const&)> const& in_C,
      std::size_t samples,
      std::size_t max_syllables,
      Rng& rng) {
    using E = typename O::element_type;
    InjectionReport report;
    auto const& D = outer.oracle();
    std::uniform_int_distribution<std::size_t> len_dist(1, max_syllables);
    std::uniform_int_distribution<int> side_dist(0, 1);
    std::size_t attempts = 0;
    while (report.samples < samples) {
      if (++attempts > samples * 1000) {
        throw CapExceeded("injection_suite could not draw enough A - C elements");
      }
      std::size_t len = len_dist(rng);
      Side s          = side_dist(rng) == 0 ? Side::L : Side::R;
      std::vector<AmalgamSyllable<E>> raw;
      while (raw.size() < len) {
        E a    = sample_A(rng);
        bool c = in_C(a);
        bool d = D.sub_member(Side::L, a);
        if (c != d) {
          ++report.hypothesis_failures;
          if (report.hypothesis_examples.size() < 5) {
            report.hypothesis_examples.push_back(
                D.print(a) + (c ? " in C but not in D" : " in A cap D but not in C"));
          }
        }
        if (c || D.is_identity(a)) {
          continue;
        }
        raw.push_back({s, a});
        s = other(s);
      }
      ++report.samples;
      auto image = outer.reduce(raw);
      if (image.syllable_length() != raw.size()) {
        ++report.violations;
        if (report.violation_examples.size() < 5) {
          std::string src;
          for (auto const& r : raw) {
            src += "(" + std::string(1, side_char(r.side)) + " " + D.print(r.elt) + ")";
          }
          report.violation_examples.push_back(src + " -> " + outer.print(image));
        }
      }
    }
    return report;
  }

}  // namespace persist
