#pragma once

// The two-stage tower
//
//   G = F *_Hhat Fbar        (level 1, bars mark the second copy)
//   D = G *_Yhat Gcheck      (level 2, checks mark the second copy)
//
// with Yhat = C_G(z), z = b^-n0 bbar^n0, and the Klein bottle groups
// K_i = <g_i, gbar_i>, their translation subgroups T_i = K_i cap Yhat and the
// Promislow-type subgroups P_i = <K_i, Kcheck_i> of D.

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "amalgam.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "finite.hpp"
#include "groups.hpp"
#include "integer.hpp"
#include "sequence.hpp"
#include "stallings.hpp"
#include "words.hpp"

namespace persist {

  using GOracle  = SubgroupDouble<FreeGroup>;
  using GEngine  = Amalgam<GOracle>;
  using GElement = GEngine::element_type;
  using DOracle  = SubgroupDouble<GEngine>;
  using DEngine  = Amalgam<DOracle>;
  using DElement = DEngine::element_type;

  // Klein bottle group Z *_2Z Zbar, generators u = (L 1), ubar = (R 1).
  using KleinOracle  = SubgroupDouble<IntegerGroup>;
  using KleinEngine  = Amalgam<KleinOracle>;
  using KleinElement = KleinEngine::element_type;

  inline KleinEngine klein_engine() {
    return KleinEngine(KleinOracle(IntegerGroup{}, [](Int const& x) { return (x & 1) == 0; }));
  }

  inline TranslationToolkit<KleinOracle> klein_toolkit() {
    return TranslationToolkit<KleinOracle>(klein_engine(), [](Int const&) { return true; },
                                           Int(1));
  }

  inline GEngine g_engine(MultiplicativeSeq const& seq) {
    return GEngine(GOracle(FreeGroup{}, [seq](Word const& w) { return member_Hhat(seq, w); }));
  }

  // Erase bars: the retraction G -> F (a homomorphism for the canonical
  // gluing, fixing Hhat).
  inline Word retract(GElement const& g) {
    Word w;
    for (auto const& s : g.syllables()) {
      w *= s.elt;
    }
    return w;
  }

  // g in Yhat iff g = n z^q with n in Hhat.  Since the retraction kills z,
  // n must be the retraction of g; the rest must be a power of z.
  inline bool yhat_member(GEngine const& G,
                          MultiplicativeSeq const& seq,
                          GElement const& z,
                          GElement const& g) {
    Word n = retract(g);
    if (!member_Hhat(seq, n)) {
      return false;
    }
    GElement y      = G.mult(G.make(Side::L, n.inverse()), g);
    std::size_t len = y.syllable_length();
    if (len % 2 != 0) {
      return false;
    }
    if (len == 0) {
      return true;
    }
    Int q = static_cast<unsigned long long>(len / 2);
    if (y[0].side == Side::R) {
      q = -q;
    }
    return G.equal(y, G.pow(z, q));
  }

  class TowerContext {
   public:
    explicit TowerContext(MultiplicativeSeq seq)
        : _seq(std::move(seq)),
          _G(g_engine(_seq)),
          _h(Word(Gen::b, _seq.n(0))),
          _z(_G.mult(_G.make(Side::L, _h.inverse()), _G.make(Side::R, _h))),
          _ell(_G.mult(_G.make(Side::L, _h), _G.make(Side::R, _h.inverse()))),
          _D(make_d(_G, _seq, _z)) {}

    TowerContext(TowerContext const&)            = delete;
    TowerContext& operator=(TowerContext const&) = delete;

    MultiplicativeSeq const& seq() const noexcept {
      return _seq;
    }

    GEngine const& G() const noexcept {
      return _G;
    }

    DEngine const& D() const noexcept {
      return _D;
    }

    GElement const& z() const noexcept {
      return _z;
    }

    GElement const& ell() const noexcept {
      return _ell;
    }

    // h = b^n0, ell = h hbar^-1.  Note z = h^-1 hbar is the ell of h^-1, and
    // z = h^-1 ell^-1 h; both have centralizer N x <ell>.
    Word const& h() const noexcept {
      return _h;
    }

    // Translation toolkit for Y = H *_Hhat Hbar inside G.
    TranslationToolkit<GOracle> y_toolkit() const {
      auto seq = _seq;
      return TranslationToolkit<GOracle>(_G, [seq](Word const& w) { return member_H(seq, w); },
                                         _h);
    }

    bool yhat_member(GElement const& g) const {
      return persist::yhat_member(_G, _seq, _z, g);
    }

    // Brute-force oracle: g z g^-1 = z.
    bool commutes_with_z(GElement const& g) const {
      return _G.equal(_G.mult(_G.mult(g, _z), _G.invert(g)), _z);
    }

    ////////////////////////////////////////////////////////////////////
    // Distinguished elements
    ////////////////////////////////////////////////////////////////////

    Word g_word(std::size_t i) const {
      return generator(_seq, i);
    }

    GElement g(std::size_t i) const {
      return _G.make(Side::L, g_word(i));
    }

    GElement gbar(std::size_t i) const {
      return _G.make(Side::R, g_word(i));
    }

    std::pair<GElement, GElement> klein_pair(std::size_t i) const {
      return {g(i), gbar(i)};
    }

    // Generators of T_i: g_i^2 and g_i gbar_i^-1.
    std::pair<GElement, GElement> torus_gens(std::size_t i) const {
      return {_G.pow(g(i), 2), _G.mult(g(i), _G.invert(gbar(i)))};
    }

    // Image of a Klein-bottle element under u -> g_i, ubar -> gbar_i.
    GElement klein_image(std::size_t i, KleinElement const& k) const {
      GElement out;
      Word gi = g_word(i);
      for (auto const& s : k.syllables()) {
        out = _G.mult(out, _G.make(s.side, gi.pow(s.elt)));
      }
      return out;
    }

    DElement lift(Side s, GElement const& x) const {
      return _D.make(s, x);
    }

    // The four generators g_i, gbar_i, gcheck_i, gbarcheck_i of P_i.
    std::vector<DElement> promislow_gens(std::size_t i) const {
      return {lift(Side::L, g(i)), lift(Side::L, gbar(i)), lift(Side::R, g(i)),
              lift(Side::R, gbar(i))};
    }

    // CLI names: z, ell, g<i>, gbar<i>, gcheck<i>, gbarcheck<i>.
    std::optional<DElement> named(std::string const& name) const {
      if (name == "z") {
        return lift(Side::L, _z);
      }
      if (name == "ell") {
        return lift(Side::L, _ell);
      }
      struct Prefix {
        char const* text;
        Side outer;
        Side inner;
      };
      for (auto p : {Prefix{"gbarcheck", Side::R, Side::R}, Prefix{"gcheck", Side::R, Side::L},
                     Prefix{"gbar", Side::L, Side::R}, Prefix{"g", Side::L, Side::L}}) {
        std::string pre = p.text;
        if (name.size() > pre.size() && name.compare(0, pre.size(), pre) == 0) {
          std::string digits = name.substr(pre.size());
          if (digits.find_first_not_of("0123456789") != std::string::npos
              || digits.size() > 4) {
            return std::nullopt;
          }
          std::size_t i = std::stoul(digits);
          return lift(p.outer, _G.make(p.inner, g_word(i)));
        }
      }
      return std::nullopt;
    }

    // Level-1 element from a name (z, ell, g<i>, gbar<i>) or the grammar.
    GElement parse_g(std::string const& text) const {
      if (auto d = named(text)) {
        if (d->syllable_length() == 1 && (*d)[0].side == Side::L) {
          return (*d)[0].elt;
        }
        if (d->empty()) {
          return {};
        }
        throw ParseError("'" + text + "' names a level-2 element");
      }
      return _G.parse(text);
    }

    DElement parse_d(std::string const& text) const {
      if (auto d = named(text)) {
        return *d;
      }
      return _D.parse(text);
    }

    // Erase checks: the retraction D -> G.
    GElement retract_d(DElement const& d) const {
      GElement out;
      for (auto const& s : d.syllables()) {
        out = _G.mult(out, s.elt);
      }
      return out;
    }

    Word retract_to_f(DElement const& d) const {
      return retract(retract_d(d));
    }

    // T_i membership for a G-element of K_i by its Klein normal form: the
    // syllables are g_i^m and the number with m odd is even.  nullopt when
    // the element is not visibly in K_i.
    std::optional<bool> in_T(std::size_t i, GElement const& x) const {
      Int n           = _seq.n(i);
      Int ii          = static_cast<unsigned long long>(i);
      std::size_t odd = 0;
      for (auto const& s : x.syllables()) {
        auto syl = s.elt.syllables();
        Int e;
        if (i == 0 && syl.size() == 1 && syl[0].gen == Gen::b) {
          e = syl[0].exp;
        } else if (i > 0 && syl.size() == 3 && syl[0].gen == Gen::a && syl[0].exp == -ii
                   && syl[1].gen == Gen::b && syl[2].gen == Gen::a && syl[2].exp == ii) {
          e = syl[1].exp;
        } else {
          return std::nullopt;
        }
        if (e % n != 0) {
          return std::nullopt;
        }
        Int m = e / n;
        if ((m & 1) != 0) {
          ++odd;
        }
      }
      return odd % 2 == 0;
    }

   private:
    static DEngine make_d(GEngine const& G, MultiplicativeSeq const& seq, GElement const& z) {
      return DEngine(DOracle(G, [G, seq, z](GElement const& g) {
        return persist::yhat_member(G, seq, z, g);
      }));
    }

    MultiplicativeSeq _seq;
    GEngine _G;
    Word _h;
    GElement _z;
    GElement _ell;
    DEngine _D;
  };

  ////////////////////////////////////////////////////////////////////////
  // Persistence
  ////////////////////////////////////////////////////////////////////////

  struct PersistenceRow {
    std::string name;
    DElement generator;
    DElement base;
    Int exponent;
    bool verified;
  };

  // Each generator of P_q is the q!-th power of the matching copy of
  // a^-q b^(n_q / q!) a^q.
  inline std::vector<PersistenceRow> persistence_witness(TowerContext const& ctx, std::size_t q) {
    if (q < 1) {
      throw DomainError("persistence needs q >= 1");
    }
    Int f  = factorial(q);
    Int nq = ctx.seq().n(q);
    if (nq % f != 0) {
      throw DomainError("q! = " + f.str() + " does not divide n_q = " + nq.str());
    }
    Int qq = static_cast<unsigned long long>(q);
    Word base(Gen::a, Int(-qq));
    base.append(Gen::b, nq / f);
    base.append(Gen::a, qq);
    auto const& G = ctx.G();
    auto const& D = ctx.D();
    std::vector<PersistenceRow> rows;
    auto gens = ctx.promislow_gens(q);
    char const* names[] = {"g", "gbar", "gcheck", "gbarcheck"};
    for (std::size_t j = 0; j < 4; ++j) {
      Side outer   = j < 2 ? Side::L : Side::R;
      Side inner   = j % 2 == 0 ? Side::L : Side::R;
      DElement b   = ctx.lift(outer, G.make(inner, base));
      bool ok      = D.equal(D.pow(b, f), gens[j]);
      rows.push_back({names[j] + std::to_string(q), gens[j], b, f, ok});
    }
    return rows;
  }

  ////////////////////////////////////////////////////////////////////////
  // Coset power checks in finite quotients of D
  ////////////////////////////////////////////////////////////////////////

  // phi : D -> G -> F -> Sym(m), check retractions followed by a permutation
  // representation of F.
  inline Perm phi(TowerContext const& ctx, PermRep const& rep, DElement const& d) {
    return rep.image(ctx.retract_to_f(d));
  }

  struct CosetCheckResult {
    std::size_t subgroups = 0;
    std::size_t checks    = 0;
    std::size_t failures  = 0;
    std::vector<std::string> failure_examples;

    bool ok() const noexcept {
      return failures == 0;
    }
  };

  // In phi(D) = Q, for S of index q: phi(d)^(q!) in S for every sample d, and
  // phi of every generator of P_q lies in S.
  inline void coset_power_check(TowerContext const& ctx,
                                PermRep const& rep,
                                FiniteSubgroup const& S,
                                std::size_t q,
                                std::vector<DElement> const& samples,
                                CosetCheckResult& result) {
    ++result.subgroups;
    Int f = factorial(q);
    auto fail = [&](std::string what) {
      ++result.failures;
      if (result.failure_examples.size() < 5) {
        result.failure_examples.push_back(std::move(what));
      }
    };
    for (auto const& d : samples) {
      ++result.checks;
      if (!S.contains(power(phi(ctx, rep, d), f))) {
        fail("phi(" + ctx.D().print(d) + ")^" + f.str() + " not in S");
      }
    }
    if (ctx.seq().n(q) % f == 0) {
      for (auto const& row : persistence_witness(ctx, q)) {
        ++result.checks;
        if (!S.contains(phi(ctx, rep, row.generator))) {
          fail("phi(" + row.name + ") not in S");
        }
      }
    }
  }

  // Every subgroup of index <= max_index of the image of phi.
  inline CosetCheckResult coset_power_suite(TowerContext const& ctx,
                                            PermRep const& rep,
                                            std::size_t max_index,
                                            std::vector<DElement> const& samples) {
    CosetCheckResult result;
    FiniteGroup Q(rep);
    for (auto const& sub : low_index_subgroups(Q, max_index)) {
      coset_power_check(ctx, rep, sub.subgroup, sub.index, samples, result);
    }
    return result;
  }

}  // namespace persist
