// persist: command-line front end for the witness library.
//
// Exit codes: 0 pass / member, 1 definite negative, 2 usage or parse error,
// 3 cap exceeded.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "persist/suites.hpp"

using namespace persist;
using nlohmann::json;

namespace {

  enum Exit { pass = 0, negative = 1, usage = 2, cap = 3 };

  struct Options {
    std::string seq    = "factorial2";
    std::string format = "text";
    unsigned long long seed = 1;
    std::size_t jobs   = 1;
  };

  std::string read_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw ParseError("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void emit(Options const& o, json j, std::string const& text) {
    if (o.format == "json") {
      j["schema"] = 1;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << text;
    }
  }

  RunConfig config(Options const& o) {
    RunConfig c;
    c.seq  = MultiplicativeSeq::parse(o.seq);
    c.seed = o.seed;
    c.jobs = o.jobs;
    c.apply_environment();
    return c;
  }

  std::vector<std::string> set_lines(std::string const& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) {
        line.erase(hash);
      }
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) {
        continue;
      }
      auto e = line.find_last_not_of(" \t\r");
      out.push_back(line.substr(b, e - b + 1));
    }
    return out;
  }

  std::string perm_text(Perm const& p) {
    return PermGroup(p.size()).print(p);
  }

  ////////////////////////////////////////////////////////////////////////

  int cmd_member(Options const& o, std::string const& sub, std::size_t k, std::string const& elt) {
    RunConfig c = config(o);
    bool in     = false;
    json j{{"command", "member"}, {"sub", sub}, {"element", elt}, {"seq", c.seq.to_json()}};
    if (sub == "Yhat") {
      TowerContext ctx(c.seq);
      GElement g = ctx.parse_g(elt);
      in         = ctx.yhat_member(g);
      j["normal_form"] = ctx.G().print(g);
    } else {
      Word w = parse_word(elt);
      if (sub == "H") {
        in = member_H(c.seq, w);
      } else if (sub == "Hhat") {
        in = member_Hhat(c.seq, w);
      } else if (sub == "Hk" || sub == "Hhatk") {
        if (k == 0) {
          throw ParseError("--k is required for " + sub);
        }
        in   = sub == "Hk" ? member_Hk(c.seq, k, w) : member_Hhatk(c.seq, k, w);
        j["k"] = k;
      } else {
        throw ParseError("unknown subgroup " + sub + " (H, Hhat, Hk, Hhatk, Yhat)");
      }
      j["normal_form"] = to_string(w);
      if (sub == "H" || sub == "Hhat") {
        if (auto chi = chi_H(c.seq, w)) {
          j["chi"] = *chi ? 1 : 0;
        }
      }
    }
    j["member"] = in;
    emit(o, j, std::string(in ? "member" : "not a member") + "\n");
    return in ? pass : negative;
  }

  int cmd_normal_form(Options const& o, int level, std::string const& elt) {
    RunConfig c = config(o);
    json j{{"command", "normal-form"}, {"level", level}, {"input", elt}};
    std::string nf;
    std::size_t len = 0;
    if (level == 0) {
      Word w = parse_word(elt);
      nf     = to_string(w);
      len    = w.num_syllables();
    } else {
      TowerContext ctx(c.seq);
      if (level == 1) {
        auto g = ctx.parse_g(elt);
        nf     = ctx.G().print(g);
        len    = g.syllable_length();
        j["json"] = ctx.G().to_json(g);
      } else if (level == 2) {
        auto d = ctx.parse_d(elt);
        nf     = ctx.D().print(d);
        len    = d.syllable_length();
        j["json"] = ctx.D().to_json(d);
      } else {
        throw ParseError("--level must be 0, 1 or 2");
      }
    }
    j["normal_form"]     = nf;
    j["syllable_length"] = len;
    emit(o, j, nf + "\n");
    return pass;
  }

  int cmd_separate(Options const& o, std::string const& gens, std::string const& elt) {
    RunConfig c = config(o);
    Word w      = parse_word(elt);
    json j{{"command", "separate"}, {"element", to_string(w)}};
    CoreGraph g;
    std::vector<Word> subgroup;
    if (gens.empty()) {
      if (member_H(c.seq, w)) {
        j["member_H"] = true;
        emit(o, j, to_string(w) + " lies in H: no separation\n");
        return negative;
      }
      std::size_t k       = separation_level(c.seq, w);
      j["separation_level"] = k;
      g                   = summary_graph(c.seq, k);
      subgroup            = basis(g);
    } else {
      std::string item;
      std::istringstream in(gens);
      while (std::getline(in, item, ',')) {
        subgroup.push_back(parse_word(item));
      }
      g = from_generators(subgroup);
      if (membership(g, w)) {
        j["member"] = true;
        emit(o, j, to_string(w) + " lies in the subgroup: no separation\n");
        return negative;
      }
    }
    auto s                = separate_from_subgroup(g, w);
    bool ok               = verify_separation(s.rep, subgroup, w);
    j["rep"]              = {{"a", s.rep.a}, {"b", s.rep.b}};
    j["degree"]           = s.rep.degree();
    j["base_image"]       = s.endpoint;
    j["verified"]         = ok;
    std::ostringstream t;
    if (j.contains("separation_level")) {
      t << "separation level " << j["separation_level"].get<std::size_t>() << "\n";
    }
    t << "degree " << s.rep.degree() << "\na -> " << perm_text(s.rep.a) << "\nb -> "
      << perm_text(s.rep.b) << "\nbase 0 -> " << s.endpoint << (ok ? " (verified)" : " (FAILED)")
      << "\n";
    emit(o, j, t.str());
    return ok ? pass : negative;
  }

  std::string report_text(SuiteReport const& r) {
    std::ostringstream t;
    t << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.statement << " (" << r.checks
      << " checks, " << r.failures << " failures, " << r.seconds << " s)\n";
    for (auto const& e : r.failure_examples) {
      t << "  " << e << "\n";
    }
    if (r.name == "persistence") {
      for (auto const& row : r.details["table"]) {
        t << "  q=" << row["q"].get<std::size_t>() << " " << row["generator"].get<std::string>()
          << " = " << row["base"].get<std::string>() << " ^ " << row["exponent"].get<std::string>()
          << (row["verified"].get<bool>() ? "  ok" : "  FAILED") << "\n";
      }
    }
    if (r.name == "abelianization") {
      for (auto const& key : {"promislow", "klein", "canonical_double", "swap_double"}) {
        t << "  " << key << ": " << r.details[key]["description"].get<std::string>() << "\n";
      }
    }
    return t.str();
  }

  int cmd_suite(Options const& o,
                std::vector<std::string> names,
                std::optional<std::size_t> q,
                std::optional<std::size_t> i) {
    RunConfig c = config(o);
    if (i) {
      c.max_i = *i;
    }
    if (names.size() == 1 && names[0] == "all") {
      names = suite_names();
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (auto const& n : names) {
      auto all = suite_names();
      if (std::find(all.begin(), all.end(), n) == all.end()) {
        throw ParseError("unknown suite '" + n + "'");
      }
    }
    std::vector<std::optional<SuiteReport>> reports(names.size());
    std::vector<std::string> errors(names.size());
    std::vector<int> error_codes(names.size(), 0);
    auto run = [&](std::size_t k) {
      try {
        reports[k] = names[k] == "persistence" && q ? persistence_suite(c, q) : run_suite(names[k], c);
      } catch (CapExceeded const& e) {
        errors[k]      = e.what();
        error_codes[k] = cap;
      } catch (std::exception const& e) {
        errors[k]      = e.what();
        error_codes[k] = usage;
      }
    };
    std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, names.size()));
    if (jobs == 1) {
      for (std::size_t k = 0; k < names.size(); ++k) {
        run(k);
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
          for (std::size_t k; (k = next.fetch_add(1)) < names.size();) {
            run(k);
          }
        });
      }
      for (auto& t : pool) {
        t.join();
      }
    }
    json j{{"command", "suite"}, {"config", c.to_json()}, {"suites", json::array()}};
    std::string text;
    int code = pass;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (!reports[k]) {
        j["suites"].push_back({{"suite", names[k]}, {"error", errors[k]}});
        text += "ERROR " + names[k] + ": " + errors[k] + "\n";
        code = std::max(code, error_codes[k]);
        continue;
      }
      j["suites"].push_back(reports[k]->to_json());
      text += report_text(*reports[k]);
      if (!reports[k]->passed()) {
        code = std::max(code, static_cast<int>(negative));
      }
    }
    emit(o, j, text);
    return code;
  }

  // Group for set files: the crystallographic model by default, or Z.
  template <class F>
  int with_set_group(std::string const& group, F&& f) {
    if (group == "model") {
      return f(AffineGroup{});
    }
    if (group == "Z") {
      return f(IntegerGroup{});
    }
    if (group.rfind("Z/", 0) == 0) {
      return f(CyclicGroup(std::stoul(group.substr(2))));
    }
    throw ParseError("unknown group " + group + " (model, Z, Z/n)");
  }

  int cmd_upp_check(Options const& o, std::string const& group, std::string const& file) {
    auto lines = set_lines(read_file(file));
    return with_set_group(group, [&](auto const& G) {
      using E = typename std::decay_t<decltype(G)>::element_type;
      std::vector<E> S;
      for (auto const& l : lines) {
        S.push_back(G.parse(l));
      }
      if (S.empty()) {
        throw ParseError(file + " contains no elements");
      }
      auto before = S.size();
      S           = dedupe(S, G);
      auto cert   = upp_failure_certificate(S, G);
      std::string why;
      bool ok     = verify_upp_certificate(UppCertificate::from_json(cert.to_json()), G, &why);
      json j      = cert.to_json();
      j["command"]    = "upp-check";
      j["duplicates"] = before - S.size();
      j["reverified"] = ok;
      std::ostringstream t;
      if (cert.failure) {
        t << "no unique product in S*S (|S| = " << S.size() << ", " << cert.products.size()
          << " products, every multiplicity >= 2); certificate "
          << (ok ? "re-verified" : "REJECTED: " + why) << "\n";
      } else {
        t << "unique product " << cert.set[cert.witness->first] << " * "
          << cert.set[cert.witness->second] << " (pairs " << cert.witness->first << ","
          << cert.witness->second << ")\n";
      }
      emit(o, j, t.str());
      if (!ok) {
        return static_cast<int>(negative);
      }
      return cert.failure ? static_cast<int>(pass) : static_cast<int>(negative);
    });
  }

  int cmd_upp_search(Options const& o,
                     std::size_t radius,
                     std::size_t size,
                     std::optional<std::size_t> budget) {
    RunConfig c = config(o);
    auto m      = promislow_model();
    auto pool   = ball({m.x, m.y}, radius);
    SearchConfig sc;
    sc.size   = size;
    sc.budget = budget.value_or(c.search_budget);
    sc.seed   = o.seed;
    sc.jobs   = o.jobs;
    AffineGroup A;
    auto res  = search_failure_set(pool, A, sc);
    json j{{"command", "upp-search"},
           {"pool", pool.size()},
           {"radius", radius},
           {"size", size},
           {"budget", sc.budget},
           {"seed", sc.seed},
           {"evaluations", res.evaluations},
           {"restarts", res.restarts},
           {"found", res.found.has_value()}};
    std::ostringstream t;
    if (res.found) {
      std::vector<AffineElement> S;
      for (auto i : *res.found) {
        S.push_back(pool[i]);
      }
      auto cert = upp_failure_certificate(S, A);
      bool ok   = cert.failure && verify_upp_certificate(cert, A);
      j["set"]         = cert.set;
      j["certificate"] = cert.to_json();
      j["reverified"]  = ok;
      t << "# failure set found after " << res.evaluations << " evaluations; certificate "
        << (ok ? "re-verified" : "REJECTED") << "\n";
      for (auto const& s : cert.set) {
        t << s << "\n";
      }
      emit(o, j, t.str());
      return ok ? pass : negative;
    }
    t << "no failure set within " << sc.budget << " evaluations (not evidence of the property)\n";
    emit(o, j, t.str());
    return negative;
  }

  int cmd_abelianize(Options const& o, std::string const& file) {
    auto p  = parse_presentation(read_file(file));
    auto a  = abelianization(p);
    auto b  = abelianization_by_minors(p);
    json j  = a.to_json();
    if (o.format == "json") {
      j["schema"]      = 1;
      j["cross_check"] = a.rank == b.rank && a.torsion == b.torsion;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << j.dump() << "\n" << a.describe() << "\n";
    }
    return a.rank == b.rank && a.torsion == b.torsion ? pass : negative;
  }

  int cmd_double_pres(Options const& o,
                      std::string const& file,
                      std::string const& sub,
                      std::string const& gluing,
                      std::string const& images_file) {
    auto p = parse_presentation(read_file(file));
    std::vector<Relator> subgroup;
    std::string item;
    std::istringstream in(sub);
    while (std::getline(in, item, ',')) {
      subgroup.push_back(p.parse_word(item));
    }
    if (subgroup.empty()) {
      throw ParseError("--sub needs at least one subgroup generator");
    }
    GluingKind kind;
    std::vector<Relator> images;
    if (gluing == "canonical") {
      kind = GluingKind::canonical;
    } else if (gluing == "swap") {
      kind = GluingKind::swap;
    } else if (gluing == "file") {
      if (images_file.empty()) {
        throw ParseError("--gluing file needs --images");
      }
      kind = GluingKind::images;
      Presentation copies;
      for (auto const& g : p.gens) {
        copies.gens.push_back(g);
      }
      for (auto const& g : p.gens) {
        copies.gens.push_back(g + "bar");
      }
      for (auto const& l : set_lines(read_file(images_file))) {
        images.push_back(copies.parse_word(l));
      }
    } else {
      throw ParseError("--gluing must be canonical, swap or file");
    }
    auto d = double_presentation(p, subgroup, kind, images);
    auto a = abelianization(d);
    json j{{"command", "double-pres"},
           {"gluing", gluing},
           {"presentation", to_string(d)},
           {"abelianization", a.to_json()}};
    emit(o, j, to_string(d) + "# abelianization " + a.describe() + "\n");
    return pass;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"persist: witnesses for a family of amalgamated free products"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seq", o.seq, "sequence rule: factorial2 or a JSON config")->capture_default_str();
  app.add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", o.jobs, "concurrent jobs")->check(CLI::PositiveNumber)->capture_default_str();

  std::string sub = "H", elt, gens, group = "model", file, gluing = "canonical", images, subgens;
  std::size_t k = 0, radius = 3, size = 14;
  int level     = 1;
  std::vector<std::string> names;
  std::optional<std::size_t> q, i, budget;

  auto* member = app.add_subcommand("member", "subgroup membership (H, Hhat, Hk, Hhatk, Yhat)");
  member->add_option("--sub", sub, "subgroup")->capture_default_str();
  member->add_option("--k", k, "summary index for Hk / Hhatk");
  member->add_option("element", elt, "word (or level-1 element for Yhat)")->required();

  auto* nf = app.add_subcommand("normal-form", "reduce an element to normal form");
  nf->add_option("--level", level, "0 = F, 1 = G, 2 = D")->capture_default_str();
  nf->add_option("element", elt, "element or distinguished name")->required();

  auto* sep = app.add_subcommand("separate", "separation level and a separating completion");
  sep->add_option("--gens", gens, "comma-separated subgroup generators (default: H via H_k)");
  sep->add_option("element", elt, "word")->required();

  auto* suite = app.add_subcommand("suite", "run named witness suites (or 'all')");
  suite->add_option("names", names, "suite names")->required();
  suite->add_option("--q", q, "persistence: only this q");
  suite->add_option("--i", i, "largest index i for klein / torus");

  auto* uc = app.add_subcommand("upp-check", "unique-product witness or failure certificate for S*S");
  uc->add_option("--group", group, "model, Z or Z/n")->capture_default_str();
  uc->add_option("file", file, "set file, one element per line")->required();

  auto* us = app.add_subcommand("upp-search", "search the model's ball for a unique-product-free set");
  us->add_option("--radius", radius, "ball radius")->capture_default_str();
  us->add_option("--size", size, "set size")->capture_default_str();
  us->add_option("--budget", budget, "objective evaluations");

  auto* ab = app.add_subcommand("abelianize", "invariant factors of a presentation");
  ab->add_option("file", file, "presentation file")->required();

  auto* dp = app.add_subcommand("double-pres", "presentation of a double along a subgroup");
  dp->add_option("file", file, "presentation file")->required();
  dp->add_option("--sub", subgens, "comma-separated subgroup generators")->required();
  dp->add_option("--gluing", gluing, "canonical, swap or file")
      ->check(CLI::IsMember({"canonical", "swap", "file"}))
      ->capture_default_str();
  dp->add_option("--images", images, "file of gluing images, one word per line");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int rc = app.exit(e);
    return rc == 0 ? pass : usage;
  }

  try {
    if (*member) return cmd_member(o, sub, k, elt);
    if (*nf) return cmd_normal_form(o, level, elt);
    if (*sep) return cmd_separate(o, gens, elt);
    if (*suite) return cmd_suite(o, names, q, i);
    if (*uc) return cmd_upp_check(o, group, file);
    if (*us) return cmd_upp_search(o, radius, size, budget);
    if (*ab) return cmd_abelianize(o, file);
    if (*dp) return cmd_double_pres(o, file, subgens, gluing, images);
  } catch (CapExceeded const& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return cap;
  } catch (ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return usage;
  } catch (DomainError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
