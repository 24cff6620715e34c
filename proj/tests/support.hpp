#pragma once

#include <random>
#include <vector>

#include "persist/words.hpp"

namespace persist::test {

  inline std::vector<Syllable> random_raw(std::mt19937_64& rng, std::size_t n, int max_exp = 3) {
    std::uniform_int_distribution<int> gen(0, 1);
    std::uniform_int_distribution<int> ex(-max_exp, max_exp);
    std::vector<Syllable> raw;
    for (std::size_t i = 0; i < n; ++i) {
      raw.push_back({gen(rng) == 0 ? Gen::a : Gen::b, Int(ex(rng))});
    }
    return raw;
  }

  inline Word random_word(std::mt19937_64& rng, std::size_t n, int max_exp = 3) {
    auto raw = random_raw(rng, n, max_exp);
    return Word::reduce(raw);
  }

  // Letter-by-letter reduction with a stack, independent of Word::append.
  inline std::vector<int> letters(std::vector<Syllable> const& raw) {
    std::vector<int> out;
    for (auto const& s : raw) {
      int base = s.gen == Gen::a ? 1 : 2;
      long e   = static_cast<long>(s.exp);
      int x    = e > 0 ? base : -base;
      for (long k = 0; k < (e > 0 ? e : -e); ++k) {
        if (!out.empty() && out.back() == -x) {
          out.pop_back();
        } else {
          out.push_back(x);
        }
      }
    }
    return out;
  }

  inline std::vector<int> letters(Word const& w) {
    std::vector<Syllable> raw(w.syllables().begin(), w.syllables().end());
    return letters(raw);
  }

}  // namespace persist::test
