#pragma once

// Random and exhaustive generation of words and amalgam elements for the
// property suites.  All generators take an explicit engine, so results are
// reproducible from a seed.

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "amalgam.hpp"
#include "family.hpp"
#include "words.hpp"

namespace persist {

  using Rng = std::mt19937_64;

  // Uniform letter-by-letter reduced word of length exactly n.
  inline Word random_word_of_length(Rng& rng, std::size_t n) {
    std::uniform_int_distribution<int> first(0, 3), next(0, 2);
    Word w;
    int prev = -1;
    for (std::size_t k = 0; k < n; ++k) {
      int letter = prev < 0 ? first(rng) : next(rng);
      if (prev >= 0 && letter >= (prev ^ 1)) {
        ++letter;  // skip the inverse of the previous letter
      }
      w.append(letter < 2 ? Gen::a : Gen::b, (letter & 1) ? Int(-1) : Int(1));
      prev = letter;
    }
    return w;
  }

  inline Word random_word(Rng& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    return random_word_of_length(rng, len(rng));
  }

  inline Word random_nontrivial_word(Rng& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    return random_word_of_length(rng, len(rng));
  }

  // Every reduced word of length <= n, shortest first.
  inline std::vector<Word> all_words(std::size_t n) {
    std::vector<Word> out{Word()};
    std::vector<std::pair<Word, int>> frontier{{Word(), -1}};
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::pair<Word, int>> next;
      for (auto const& [w, prev] : frontier) {
        for (int letter = 0; letter < 4; ++letter) {
          if (prev >= 0 && letter == (prev ^ 1)) {
            continue;
          }
          Word v = w;
          v.append(letter < 2 ? Gen::a : Gen::b, (letter & 1) ? Int(-1) : Int(1));
          out.push_back(v);
          next.emplace_back(std::move(v), letter);
        }
      }
      frontier = std::move(next);
    }
    return out;
  }

  // Random product of g_i^(+-1) with i <= max_index; also returns the number
  // of factors (its parity is chi).
  inline std::pair<Word, std::size_t> random_h_element(MultiplicativeSeq const& seq,
                                                       Rng& rng,
                                                       std::size_t max_index,
                                                       std::size_t max_factors) {
    std::uniform_int_distribution<std::size_t> count(1, max_factors), idx(0, max_index);
    std::uniform_int_distribution<int> sign(0, 1);
    std::size_t c = count(rng);
    Word w;
    for (std::size_t k = 0; k < c; ++k) {
      Word g = generator(seq, idx(rng));
      w *= sign(rng) ? g : g.inverse();
    }
    return {w, c};
  }

  // Random raw alternating product of `syllables` factor elements drawn by
  // `draw`, starting on a random side, then reduced.
  template <class O, class Draw>
  typename Amalgam<O>::element_type random_element(Amalgam<O> const& engine,
                                                   Rng& rng,
                                                   std::size_t syllables,
                                                   Draw&& draw) {
    std::uniform_int_distribution<int> side(0, 1);
    Side s = side(rng) ? Side::R : Side::L;
    std::vector<typename Amalgam<O>::syllable> raw;
    for (std::size_t k = 0; k < syllables; ++k) {
      raw.push_back({s, draw(rng)});
      s = other(s);
    }
    return engine.reduce(raw);
  }

}  // namespace persist
