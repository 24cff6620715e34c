#pragma once

// Exact arithmetic in the free group F(a, b).
//
// A Word is stored run-length encoded as a sequence of syllables (generator,
// nonzero exponent) with adjacent generators distinct.  Exponents are
// arbitrary precision, so b^(2*20!) costs one syllable.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include <boost/container/small_vector.hpp>

#include "errors.hpp"
#include "integer.hpp"

namespace persist {

  enum class Gen : std::uint8_t { a = 0, b = 1 };

  inline constexpr Gen other(Gen g) noexcept {
    return g == Gen::a ? Gen::b : Gen::a;
  }

  inline constexpr std::size_t index(Gen g) noexcept {
    return static_cast<std::size_t>(g);
  }

  struct Syllable {
    Gen gen;
    Int exp;

    friend bool operator==(Syllable const&, Syllable const&) = default;
  };

  class Word {
   public:
    using container_type = boost::container::small_vector<Syllable, 4>;

    Word() = default;

    explicit Word(Gen g, Int const& exp = 1) {
      append(g, exp);
    }

    // Free reduction of an arbitrary syllable list.
    static Word reduce(std::span<Syllable const> raw) {
      Word w;
      for (auto const& s : raw) {
        w.append(s.gen, s.exp);
      }
      return w;
    }

    static Word reduce(std::initializer_list<Syllable> raw) {
      return reduce(std::span<Syllable const>(raw.begin(), raw.size()));
    }

    std::span<Syllable const> syllables() const noexcept {
      return {_syl.data(), _syl.size()};
    }

    std::size_t num_syllables() const noexcept {
      return _syl.size();
    }

    bool is_identity() const noexcept {
      return _syl.empty();
    }

    // Sum of |exponent|, i.e. the ordinary word length.
    Int length() const {
      Int r = 0;
      for (auto const& s : _syl) {
        r += persist::abs(s.exp);
      }
      return r;
    }

    Int length(Gen g) const {
      Int r = 0;
      for (auto const& s : _syl) {
        if (s.gen == g) {
          r += persist::abs(s.exp);
        }
      }
      return r;
    }

    // Right-multiply by g^exp, cancelling as needed.
    Word& append(Gen g, Int const& exp) {
      if (exp == 0) {
        return *this;
      }
      if (!_syl.empty() && _syl.back().gen == g) {
        _syl.back().exp += exp;
        if (_syl.back().exp == 0) {
          _syl.pop_back();
        }
      } else {
        _syl.push_back({g, exp});
      }
      return *this;
    }

    Word& operator*=(Word const& v) {
      if (&v == this) {
        Word copy = v;
        return *this *= copy;
      }
      for (auto const& s : v._syl) {
        append(s.gen, s.exp);
      }
      return *this;
    }

    friend Word operator*(Word u, Word const& v) {
      u *= v;
      return u;
    }

    Word inverse() const {
      Word r;
      r._syl.reserve(_syl.size());
      for (auto it = _syl.rbegin(); it != _syl.rend(); ++it) {
        r._syl.push_back({it->gen, Int(-it->exp)});
      }
      return r;
    }

    Word pow(Int k) const {
      if (k < 0) {
        return inverse().pow(Int(-k));
      }
      // Split off the cyclically reduced core so that powers of conjugates
      // stay compact: u = c^-1 m c  =>  u^k = c^-1 m^k c.
      std::size_t lo = 0;
      std::size_t hi = _syl.size();
      while (hi - lo >= 2 && _syl[lo].gen == _syl[hi - 1].gen
             && _syl[lo].exp == -_syl[hi - 1].exp) {
        ++lo;
        --hi;
      }
      Word r;
      for (std::size_t i = 0; i < lo; ++i) {
        r.append(_syl[i].gen, _syl[i].exp);
      }
      if (hi - lo == 1) {
        r.append(_syl[lo].gen, _syl[lo].exp * k);
      } else if (hi > lo) {
        Word core;
        for (std::size_t i = lo; i < hi; ++i) {
          core.append(_syl[i].gen, _syl[i].exp);
        }
        // Remaining core may still cancel across its ends (a^2 b a^-1); the
        // square-and-multiply below handles that through append.
        Word acc;
        Word base = core;
        Int e = k;
        while (e > 0) {
          if ((e & 1) != 0) {
            acc *= base;
          }
          e >>= 1;
          if (e > 0) {
            base *= base;
          }
        }
        r *= acc;
      }
      for (std::size_t i = hi; i < _syl.size(); ++i) {
        r.append(_syl[i].gen, _syl[i].exp);
      }
      return r;
    }

    // g^-1 u g
    Word conjugate(Word const& g) const {
      return g.inverse() * *this * g;
    }

    friend bool operator==(Word const& u, Word const& v) {
      return u._syl == v._syl;
    }

    friend bool operator<(Word const& u, Word const& v) {
      std::size_t n = std::min(u._syl.size(), v._syl.size());
      for (std::size_t i = 0; i < n; ++i) {
        auto const& s = u._syl[i];
        auto const& t = v._syl[i];
        if (s.gen != t.gen) {
          return s.gen < t.gen;
        }
        if (s.exp != t.exp) {
          return s.exp < t.exp;
        }
      }
      return u._syl.size() < v._syl.size();
    }

    std::size_t hash() const noexcept {
      std::size_t h = 0x9e3779b97f4a7c15ULL;
      for (auto const& s : _syl) {
        h ^= hash_int(s.exp) + index(s.gen) + (h << 6) + (h >> 2);
      }
      return h;
    }

   private:
    container_type _syl;
  };

  inline Word operator""_a(unsigned long long e) {
    return Word(Gen::a, Int(e));
  }

  inline Word operator""_b(unsigned long long e) {
    return Word(Gen::b, Int(e));
  }

  inline Word const& word_a() {
    static Word const w(Gen::a);
    return w;
  }

  inline Word const& word_b() {
    static Word const w(Gen::b);
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text grammar
  ////////////////////////////////////////////////////////////////////////

  // `a`, `b` generators, `A`, `B` inverses, `^n` an integer exponent,
  // juxtaposition for product, `1` for the identity; whitespace ignored.
  // Printing emits syllables separated by one space, e.g. `A^2 b^4 a^2`.
  inline std::string to_string(Word const& w) {
    if (w.is_identity()) {
      return "1";
    }
    std::string out;
    for (auto const& s : w.syllables()) {
      if (!out.empty()) {
        out += ' ';
      }
      bool neg = s.exp < 0;
      char c = s.gen == Gen::a ? 'a' : 'b';
      out += neg ? static_cast<char>(std::toupper(c)) : c;
      Int e = persist::abs(s.exp);
      if (e != 1) {
        out += '^';
        out += e.str();
      }
    }
    return out;
  }

  inline std::ostream& operator<<(std::ostream& os, Word const& w) {
    return os << to_string(w);
  }

  inline Word parse_word(std::string_view text) {
    Word w;
    std::size_t i = 0;
    bool saw_one = false;
    bool saw_letter = false;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
    };
    skip_ws();
    while (i < text.size()) {
      char c = text[i];
      if (c == '1') {
        saw_one = true;
        ++i;
        skip_ws();
        continue;
      }
      Gen g;
      int sign;
      switch (c) {
        case 'a': g = Gen::a; sign = 1; break;
        case 'b': g = Gen::b; sign = 1; break;
        case 'A': g = Gen::a; sign = -1; break;
        case 'B': g = Gen::b; sign = -1; break;
        default:
          throw ParseError("unexpected character '" + std::string(1, c)
                           + "' in word '" + std::string(text) + "'");
      }
      saw_letter = true;
      ++i;
      skip_ws();
      Int e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
          ++i;
        }
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          ++i;
        }
        e = parse_int(std::string(text.substr(start, i - start)));
        skip_ws();
      }
      w.append(g, e * sign);
    }
    if (saw_one && saw_letter) {
      throw ParseError("identity token '1' mixed with letters in '"
                       + std::string(text) + "'");
    }
    return w;
  }

}  // namespace persist

template <>
struct std::hash<persist::Word> {
  std::size_t operator()(persist::Word const& w) const noexcept {
    return w.hash();
  }
};
