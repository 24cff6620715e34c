#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace persist {

  using Int = boost::multiprecision::cpp_int;

  inline Int abs(Int const& x) {
    return x < 0 ? Int(-x) : x;
  }

  // Non-negative remainder, m > 0.
  inline Int mod(Int const& x, Int const& m) {
    Int r = x % m;
    if (r < 0) {
      r += m;
    }
    return r;
  }

  inline Int factorial(std::size_t n) {
    Int r = 1;
    for (std::size_t i = 2; i <= n; ++i) {
      r *= i;
    }
    return r;
  }

  // Narrowing with a bound check; used where exponents become step counts.
  inline std::size_t to_size(Int const& x, std::size_t limit, char const* what) {
    if (x < 0 || x > limit) {
      throw CapExceeded(std::string(what) + ": value " + x.str()
                        + " exceeds limit " + std::to_string(limit));
    }
    return static_cast<std::size_t>(x);
  }

  inline std::size_t hash_int(Int const& x) {
    return boost::multiprecision::hash_value(x);
  }

  inline Int parse_int(std::string const& s) {
    if (s.empty()) {
      throw ParseError("empty integer");
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
      throw ParseError("bad integer '" + s + "'");
    }
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] < '0' || s[j] > '9') {
        throw ParseError("bad integer '" + s + "'");
      }
    }
    Int r(s.substr(i));
    return s[0] == '-' ? Int(-r) : r;
  }

}  // namespace persist
