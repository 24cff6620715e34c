#pragma once

// Separating words from finitely generated subgroups of F through
// completions, and certificates that an element of G = F *_Hhat Fbar is
// nontrivial: its image in a double Q *_S Qbar of a finite permutation image
// Q of F, with S a subgroup containing the image of Hhat, reduces to a
// nonempty normal form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "amalgam.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "finite.hpp"
#include "perm.hpp"
#include "sequence.hpp"
#include "stallings.hpp"
#include "tower.hpp"
#include "words.hpp"

namespace persist {

  struct Separation {
    PermRep rep;
    std::uint32_t endpoint = 0;  // image of the base point under w
  };

  // A completion of g in which w moves the base point.
  inline Separation separate_from_subgroup(CoreGraph const& g, Word const& w) {
    if (membership(g, w)) {
      throw DomainError(to_string(w) + " lies in the subgroup");
    }
    Separation s{completion(extend_by_path(g, w)).rep, 0};
    s.endpoint = s.rep.act(0, w);
    if (s.endpoint == 0) {
      throw DomainError("completion failed to separate " + to_string(w));
    }
    return s;
  }

  // Replay: every generator fixes the base and w does not.
  inline bool verify_separation(PermRep const& rep, std::vector<Word> const& gens, Word const& w) {
    if (!rep.valid()) {
      return false;
    }
    for (auto const& g : gens) {
      if (rep.act(0, g) != 0) {
        return false;
      }
    }
    return rep.act(0, w) != 0;
  }

  ////////////////////////////////////////////////////////////////////////
  // Finite doubles
  ////////////////////////////////////////////////////////////////////////

  using FiniteDoubleOracle = SubgroupDouble<PermGroup>;
  using FiniteDouble       = Amalgam<FiniteDoubleOracle>;

  // Generators of rho(Hhat): rho(g_0) v and v rho(g_0)^-1 over the finitely
  // many values v = rho(g_i).  rho(g_i) depends only on i mod ord(rho a) and
  // n_i mod ord(rho b).
  inline std::vector<Perm> hhat_image_generators(MultiplicativeSeq const& seq, PermRep const& rep) {
    std::size_t oa = order(rep.a);
    std::size_t ob = order(rep.b);
    std::set<Perm> values;
    for (auto const& [r, s] : seq.residues(oa, ob)) {
      Perm ar = power(rep.a, Int(static_cast<unsigned long long>(r)));
      values.insert(compose(compose(inverse(ar), power(rep.b, Int(static_cast<unsigned long long>(s)))),
                            ar));
    }
    Perm g0 = rep.image(generator(seq, 0));
    std::set<Perm> gens;
    for (auto const& v : values) {
      gens.insert(compose(g0, v));
      gens.insert(compose(v, inverse(g0)));
    }
    gens.erase(identity_perm(rep.degree()));
    return {gens.begin(), gens.end()};
  }

  inline FiniteDouble finite_double(std::size_t degree, std::shared_ptr<StabilizerChain const> S) {
    return FiniteDouble(
        FiniteDoubleOracle(PermGroup(degree), [S](Perm const& p) { return S->contains(p); }));
  }

  struct RFCertificate {
    enum class Kind { retraction, finite_double };

    std::string target;  // level-1 normal form
    Kind kind         = Kind::retraction;
    std::size_t level = 0;  // summary index used (0 for the retraction)
    bool hat          = false;
    PermRep rep;
    std::vector<Perm> syllable_images;
    std::vector<Perm> subgroup_gens;  // S (finite double only)
    std::string subgroup_order;
    std::string image;  // reduced image
    std::size_t image_length = 0;
    bool nontrivial          = false;

    nlohmann::json to_json() const {
      auto perms = [](std::vector<Perm> const& ps) {
        nlohmann::json a = nlohmann::json::array();
        for (auto const& p : ps) {
          a.push_back(p);
        }
        return a;
      };
      nlohmann::json j;
      j["schema"]          = 1;
      j["target"]          = target;
      j["kind"]            = kind == Kind::retraction ? "retraction" : "finite_double";
      j["level"]           = level;
      j["hat_graph"]       = hat;
      j["rep"]             = {{"a", rep.a}, {"b", rep.b}};
      j["syllable_images"] = perms(syllable_images);
      j["subgroup_gens"]   = perms(subgroup_gens);
      j["subgroup_order"]  = subgroup_order;
      j["image"]           = image;
      j["image_length"]    = image_length;
      j["nontrivial"]      = nontrivial;
      return j;
    }

    static RFCertificate from_json(nlohmann::json const& j) {
      try {
        if (j.at("schema").get<int>() != 1) {
          throw ParseError("unsupported certificate schema");
        }
        RFCertificate c;
        c.target = j.at("target").get<std::string>();
        auto k   = j.at("kind").get<std::string>();
        if (k == "retraction") {
          c.kind = Kind::retraction;
        } else if (k == "finite_double") {
          c.kind = Kind::finite_double;
        } else {
          throw ParseError("unknown certificate kind " + k);
        }
        c.level           = j.at("level").get<std::size_t>();
        c.hat             = j.at("hat_graph").get<bool>();
        c.rep.a           = j.at("rep").at("a").get<Perm>();
        c.rep.b           = j.at("rep").at("b").get<Perm>();
        c.syllable_images = j.at("syllable_images").get<std::vector<Perm>>();
        c.subgroup_gens   = j.at("subgroup_gens").get<std::vector<Perm>>();
        c.subgroup_order  = j.at("subgroup_order").get<std::string>();
        c.image           = j.at("image").get<std::string>();
        c.image_length    = j.at("image_length").get<std::size_t>();
        c.nontrivial      = j.at("nontrivial").get<bool>();
        return c;
      } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("malformed RF certificate: ") + e.what());
      }
    }
  };

  struct RFOptions {
    std::size_t max_level  = 5;
    std::size_t max_degree = 200;
  };

  namespace detail {

    struct DoubleImage {
      std::vector<Perm> images;
      std::vector<Perm> gens;
      std::shared_ptr<StabilizerChain const> S;
      FiniteDouble::element_type image;
    };

    inline DoubleImage double_image(MultiplicativeSeq const& seq,
                                    PermRep const& rep,
                                    GElement const& x) {
      DoubleImage d;
      d.gens = hhat_image_generators(seq, rep);
      d.S    = std::make_shared<StabilizerChain const>(d.gens, rep.degree());
      FiniteDouble Q = finite_double(rep.degree(), d.S);
      std::vector<FiniteDouble::syllable> raw;
      for (auto const& s : x.syllables()) {
        d.images.push_back(rep.image(s.elt));
        raw.push_back({s.side, d.images.back()});
      }
      d.image = Q.reduce(raw);
      return d;
    }

  }  // namespace detail

  // Certificate that x != 1 in G.  One syllable: a completion of the x-path
  // in which x moves the base (through the retraction G -> F).  Otherwise the
  // smallest summary index k whose graph (H_k first, then Hhat_k), extended by
  // the syllable paths and completed, gives an image of full syllable length;
  // failing that, the first candidate with a nontrivial shorter image.
  // Elements with no nontrivial image under any candidate raise CapExceeded:
  // for sequences where every r! divides some n_i this includes every
  // element killed by all finite quotients (z, ell, ...).
  inline RFCertificate rf_witness_G(TowerContext const& ctx,
                                    GElement const& x,
                                    RFOptions const& opt = {}) {
    GEngine const& G = ctx.G();
    if (G.is_identity(x)) {
      throw DomainError("the identity has no nontriviality certificate");
    }
    RFCertificate c;
    c.target       = G.print(x);
    std::size_t p  = x.syllable_length();
    if (p == 1) {
      Word w         = x[0].elt;
      auto sep       = separate_from_subgroup(CoreGraph(1, 0), w);
      c.kind         = RFCertificate::Kind::retraction;
      c.rep          = sep.rep;
      c.syllable_images = {c.rep.image(w)};
      c.image        = PermGroup(c.rep.degree()).print(c.syllable_images.front());
      c.image_length = 1;
      c.nontrivial   = true;
      return c;
    }
    auto const& seq = ctx.seq();
    std::optional<RFCertificate> fallback;
    for (std::size_t k = 1; k <= opt.max_level; ++k) {
      for (bool hat : {false, true}) {
        CoreGraph g;
        try {
          g = hat ? hat_summary_graph(seq, k) : summary_graph(seq, k);
        } catch (CapExceeded const&) {
          continue;
        } catch (DomainError const&) {
          continue;
        }
        for (auto const& s : x.syllables()) {
          if (!membership(g, s.elt)) {
            g = extend_by_path(g, s.elt);
          }
        }
        if (g.num_vertices() > opt.max_degree) {
          continue;
        }
        PermRep rep = completion(g).rep;
        auto d      = detail::double_image(seq, rep, x);
        std::size_t len = d.image.syllable_length();
        if (len == 0 || (fallback && len < p)) {
          continue;
        }
        RFCertificate r   = c;
        r.kind            = RFCertificate::Kind::finite_double;
        r.level           = k;
        r.hat             = hat;
        r.rep             = rep;
        r.syllable_images = d.images;
        r.subgroup_gens   = d.gens;
        r.subgroup_order  = d.S->order().str();
        r.image           = finite_double(rep.degree(), d.S).print(d.image);
        r.image_length    = len;
        r.nontrivial      = true;
        if (len == p) {
          return r;
        }
        fallback = std::move(r);
      }
    }
    if (fallback) {
      return *fallback;
    }
    throw CapExceeded("no finite double up to summary index " + std::to_string(opt.max_level)
                      + " and degree " + std::to_string(opt.max_degree) + " detects " + c.target);
  }

  // Independent replay from the certificate's data: reparse the target,
  // recompute syllable images, recompute rho(Hhat) and check it lies in the
  // recorded S, recompute |S|, reduce the image in Q *_S Qbar and compare
  // with the recorded normal form and verdict.
  inline bool verify_certificate(TowerContext const& ctx,
                                 RFCertificate const& c,
                                 std::string* why = nullptr) {
    auto fail = [&](std::string msg) {
      if (why != nullptr) {
        *why = std::move(msg);
      }
      return false;
    };
    GEngine const& G = ctx.G();
    GElement x;
    try {
      x = G.parse(c.target);
    } catch (std::exception const& e) {
      return fail(std::string("unparsable target: ") + e.what());
    }
    if (G.is_identity(x)) {
      return fail("target is the identity");
    }
    if (G.print(x) != c.target) {
      return fail("target is not in normal form");
    }
    if (!c.rep.valid()) {
      return fail("permutation representation is invalid");
    }
    std::size_t n = c.rep.degree();
    if (c.syllable_images.size() != x.syllable_length()) {
      return fail("wrong number of syllable images");
    }
    for (std::size_t i = 0; i < x.syllable_length(); ++i) {
      if (c.rep.image(x[i].elt) != c.syllable_images[i]) {
        return fail("syllable image " + std::to_string(i) + " does not match the representation");
      }
    }
    if (c.kind == RFCertificate::Kind::retraction) {
      if (x.syllable_length() != 1) {
        return fail("retraction certificate for a multi-syllable element");
      }
      bool nontrivial = !is_identity(c.syllable_images.front());
      if (PermGroup(n).print(c.syllable_images.front()) != c.image) {
        return fail("recorded image differs");
      }
      if (nontrivial != c.nontrivial || c.image_length != (nontrivial ? 1u : 0u)) {
        return fail("verdict does not match the replay");
      }
      return nontrivial || fail("image is trivial");
    }
    for (auto const& g : c.subgroup_gens) {
      if (g.size() != n || !is_permutation(g)) {
        return fail("subgroup generator is not a permutation of the right degree");
      }
    }
    auto S = std::make_shared<StabilizerChain const>(c.subgroup_gens, n);
    if (S->order().str() != c.subgroup_order) {
      return fail("recorded subgroup order differs");
    }
    for (auto const& h : hhat_image_generators(ctx.seq(), c.rep)) {
      if (!S->contains(h)) {
        return fail("S does not contain the image of Hhat");
      }
    }
    // Direct spot check of rho(g_i) against the residue computation.
    Perm g0 = c.rep.image(generator(ctx.seq(), 0));
    for (std::size_t i = 0; i < 32; ++i) {
      Perm gi = c.rep.image(generator(ctx.seq(), i));
      if (!S->contains(compose(g0, gi)) || !S->contains(compose(gi, inverse(g0)))) {
        return fail("rho(g_" + std::to_string(i) + ") escapes S");
      }
    }
    FiniteDouble Q = finite_double(n, S);
    std::vector<FiniteDouble::syllable> raw;
    for (std::size_t i = 0; i < x.syllable_length(); ++i) {
      raw.push_back({x[i].side, c.syllable_images[i]});
    }
    auto img = Q.reduce(raw);
    if (Q.print(img) != c.image || img.syllable_length() != c.image_length) {
      return fail("recorded image differs from the replay");
    }
    bool nontrivial = img.syllable_length() != 0;
    if (nontrivial != c.nontrivial) {
      return fail("verdict does not match the replay");
    }
    return nontrivial || fail("image is trivial");
  }

}  // namespace persist
