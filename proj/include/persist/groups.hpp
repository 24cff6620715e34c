#pragma once

// Group oracles for the factors used by the amalgam engine.
//
// A group oracle exposes
//   element_type, identity(), mult(x, y), invert(x), is_identity(x),
//   equal(x, y), hash(x), print(x), parse(text)
// and all operations are pure.

#include <cctype>
#include <cstddef>
#include <string>

#include "integer.hpp"
#include "perm.hpp"
#include "words.hpp"

namespace persist {

  class FreeGroup {
   public:
    using element_type = Word;

    Word identity() const {
      return {};
    }

    Word mult(Word const& x, Word const& y) const {
      return x * y;
    }

    Word invert(Word const& x) const {
      return x.inverse();
    }

    bool is_identity(Word const& x) const {
      return x.is_identity();
    }

    bool equal(Word const& x, Word const& y) const {
      return x == y;
    }

    std::size_t hash(Word const& x) const {
      return x.hash();
    }

    std::string print(Word const& x) const {
      return to_string(x);
    }

    Word parse(std::string const& text) const {
      return parse_word(text);
    }
  };

  // (Z, +), printed as u^n so that Klein-bottle elements read naturally.
  class IntegerGroup {
   public:
    using element_type = Int;

    Int identity() const {
      return 0;
    }

    Int mult(Int const& x, Int const& y) const {
      return x + y;
    }

    Int invert(Int const& x) const {
      return -x;
    }

    bool is_identity(Int const& x) const {
      return x == 0;
    }

    bool equal(Int const& x, Int const& y) const {
      return x == y;
    }

    std::size_t hash(Int const& x) const {
      return hash_int(x);
    }

    std::string print(Int const& x) const {
      if (x == 0) {
        return "1";
      }
      if (x == 1) {
        return "u";
      }
      if (x == -1) {
        return "U";
      }
      return x > 0 ? "u^" + x.str() : "U^" + Int(-x).str();
    }

    Int parse(std::string const& text) const {
      auto first = text.find_first_not_of(" \t");
      if (first != std::string::npos
          && (std::isdigit(static_cast<unsigned char>(text[first])) || text[first] == '-')) {
        auto last = text.find_last_not_of(" \t");
        return parse_int(text.substr(first, last - first + 1));
      }
      // Otherwise the word grammar with u read as a.
      std::string t = text;
      for (auto& c : t) {
        if (c == 'u') {
          c = 'a';
        } else if (c == 'U') {
          c = 'A';
        } else if (c == 'a' || c == 'A' || c == 'b' || c == 'B') {
          throw ParseError("integer element uses the letter u only: '" + text + "'");
        }
      }
      Word w = parse_word(t);
      return w.is_identity() ? Int(0) : w.syllables().front().exp;
    }
  };

  // Z/n, additive.
  class CyclicGroup {
   public:
    using element_type = Int;

    explicit CyclicGroup(Int n) : _n(std::move(n)) {
      if (_n < 1) {
        throw DomainError("cyclic group order must be >= 1");
      }
    }

    Int const& order() const noexcept {
      return _n;
    }

    Int identity() const {
      return 0;
    }

    Int mult(Int const& x, Int const& y) const {
      return mod(x + y, _n);
    }

    Int invert(Int const& x) const {
      return mod(-x, _n);
    }

    bool is_identity(Int const& x) const {
      return mod(x, _n) == 0;
    }

    bool equal(Int const& x, Int const& y) const {
      return mod(x - y, _n) == 0;
    }

    std::size_t hash(Int const& x) const {
      return hash_int(mod(x, _n));
    }

    std::string print(Int const& x) const {
      return mod(x, _n).str();
    }

    Int parse(std::string const& text) const {
      return mod(parse_int(text), _n);
    }

   private:
    Int _n;
  };

}  // namespace persist
