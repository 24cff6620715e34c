#pragma once

// Multiplicative sequences n_0 | n_1 | n_2 | ... given by a closed-form rule,
// so any index can be evaluated.

#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "integer.hpp"

namespace persist {

  class MultiplicativeSeq {
   public:
    enum class Rule { factorial2, geometric, explicit_prefix };

    // n_i = 2 * i!
    static MultiplicativeSeq factorial2() {
      return MultiplicativeSeq(Rule::factorial2, 0, 0, {}, 0);
    }

    // n_i = c * r^i
    static MultiplicativeSeq geometric(Int c, Int r) {
      if (c < 1 || r < 2) {
        throw DomainError("geometric sequence needs c >= 1 and r >= 2");
      }
      return MultiplicativeSeq(Rule::geometric, c, r, {}, 0);
    }

    // n_i = prefix[i] for i < |prefix|, then each term is the previous one
    // times `multiplier`.
    static MultiplicativeSeq explicit_prefix(std::vector<Int> prefix, Int multiplier) {
      if (prefix.empty() || multiplier < 1) {
        throw DomainError("explicit sequence needs a nonempty prefix and multiplier >= 1");
      }
      for (auto const& x : prefix) {
        if (x < 1) {
          throw DomainError("sequence terms must be >= 1");
        }
      }
      return MultiplicativeSeq(Rule::explicit_prefix, 0, 0, std::move(prefix), multiplier);
    }

    static MultiplicativeSeq from_json(nlohmann::json const& j) {
      std::string rule = j.at("rule").get<std::string>();
      auto as_int      = [](nlohmann::json const& v) {
        return v.is_string() ? parse_int(v.get<std::string>()) : Int(v.get<long long>());
      };
      if (rule == "factorial2") {
        return factorial2();
      }
      if (rule == "geometric") {
        return geometric(as_int(j.at("c")), as_int(j.at("r")));
      }
      if (rule == "explicit") {
        std::vector<Int> prefix;
        for (auto const& v : j.at("prefix")) {
          prefix.push_back(as_int(v));
        }
        return explicit_prefix(std::move(prefix), as_int(j.at("multiplier")));
      }
      throw ParseError("unknown sequence rule '" + rule + "'");
    }

    static MultiplicativeSeq parse(std::string const& text) {
      if (text == "factorial2") {
        return factorial2();
      }
      try {
        return from_json(nlohmann::json::parse(text));
      } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("bad sequence config: ") + e.what());
      }
    }

    nlohmann::json to_json() const {
      auto num = [](Int const& x) -> nlohmann::json {
        if (x <= Int(std::numeric_limits<long long>::max())) {
          return static_cast<long long>(x);
        }
        return x.str();
      };
      switch (_rule) {
        case Rule::factorial2:
          return {{"rule", "factorial2"}};
        case Rule::geometric:
          return {{"rule", "geometric"}, {"c", num(_c)}, {"r", num(_r)}};
        case Rule::explicit_prefix: {
          nlohmann::json p = nlohmann::json::array();
          for (auto const& x : _prefix) {
            p.push_back(num(x));
          }
          return {{"rule", "explicit"}, {"prefix", p}, {"multiplier", num(_multiplier)}};
        }
      }
      return {};
    }

    Rule rule() const noexcept {
      return _rule;
    }

    // n_i, memoized.
    Int const& n(std::size_t i) const {
      std::lock_guard<std::mutex> lock(_cache->mutex);
      auto& values = _cache->values;
      while (values.size() <= i) {
        std::size_t j = values.size();
        values.push_back(j == 0 ? first() : values.back() * ratio_unchecked(j - 1));
        if (_rule == Rule::explicit_prefix && j < _prefix.size()) {
          values.back() = _prefix[j];
        }
      }
      return values[i];
    }

    // n_{i+1} / n_i, after checking divisibility.
    Int ratio(std::size_t i) const {
      Int const& lo = n(i);
      Int const& hi = n(i + 1);
      if (hi % lo != 0) {
        throw MultiplicativityError("n_" + std::to_string(i + 1) + " = " + hi.str()
                                    + " is not a multiple of n_" + std::to_string(i)
                                    + " = " + lo.str());
      }
      return hi / lo;
    }

    void check_multiplicative(std::size_t upto) const {
      for (std::size_t i = 0; i < upto; ++i) {
        ratio(i);
      }
    }

    // All pairs (i mod mod_a, n_i mod mod_b) over every i >= 0.  The scan
    // stops once the state that determines all later pairs repeats.
    std::set<std::pair<std::size_t, std::size_t>> residues(std::size_t mod_a,
                                                           std::size_t mod_b) const {
      std::size_t start  = 0;
      std::size_t period = 1;  // period of ratio(i) mod mod_b for i >= start
      switch (_rule) {
        case Rule::factorial2:
          period = mod_b;
          break;
        case Rule::geometric:
          break;
        case Rule::explicit_prefix:
          start = _prefix.size() - 1;
          check_multiplicative(_prefix.size());
          break;
      }
      std::size_t cycle = std::lcm(mod_a, period);
      std::set<std::pair<std::size_t, std::size_t>> result;
      std::set<std::pair<std::size_t, std::size_t>> states;
      Int r = mod(n(0), Int(static_cast<unsigned long long>(mod_b)));
      for (std::size_t i = 0;; ++i) {
        std::size_t residue = static_cast<std::size_t>(r);
        if (i >= start && !states.emplace(i % cycle, residue).second) {
          break;
        }
        result.emplace(i % mod_a, residue);
        r = mod(r * ratio_unchecked(i), Int(static_cast<unsigned long long>(mod_b)));
      }
      return result;
    }

    std::string name() const {
      return to_json().dump();
    }

   private:
    struct Cache {
      std::mutex mutex;
      std::deque<Int> values;
    };

    MultiplicativeSeq(Rule rule, Int c, Int r, std::vector<Int> prefix, Int multiplier)
        : _rule(rule),
          _c(std::move(c)),
          _r(std::move(r)),
          _prefix(std::move(prefix)),
          _multiplier(std::move(multiplier)),
          _cache(std::make_shared<Cache>()) {}

    Int first() const {
      switch (_rule) {
        case Rule::factorial2:
          return 2;
        case Rule::geometric:
          return _c;
        case Rule::explicit_prefix:
          return _prefix.front();
      }
      return 1;
    }

    // Closed-form n_{i+1} / n_i; for the explicit rule inside the prefix this
    // may be non-integral, which ratio() reports.
    Int ratio_unchecked(std::size_t i) const {
      switch (_rule) {
        case Rule::factorial2:
          return Int(static_cast<unsigned long long>(i + 1));
        case Rule::geometric:
          return _r;
        case Rule::explicit_prefix:
          if (i + 1 < _prefix.size()) {
            return _prefix[i] == 0 ? Int(0) : _prefix[i + 1] / _prefix[i];
          }
          return _multiplier;
      }
      return 1;
    }

    Rule _rule;
    Int _c;
    Int _r;
    std::vector<Int> _prefix;
    Int _multiplier;
    std::shared_ptr<Cache> _cache;
  };

}  // namespace persist
