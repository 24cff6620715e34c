#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "persist/family.hpp"

namespace {

  struct Run {
    int code;
    std::string out;
  };

  Run run(std::string const& args, bool merge_stderr = true) {
    std::string cmd = std::string(PERSIST_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p         = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) {
      out.append(buf.data(), n);
    }
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
  }

  std::string data(char const* name) {
    return std::string(PERSIST_DATA) + "/" + name;
  }

  bool contains(std::string const& s, std::string const& part) {
    return s.find(part) != std::string::npos;
  }

}  // namespace

TEST_CASE("member exit codes") {
  auto r = run("member --sub Hhat \"b^2\"");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "not a member"));

  r = run("member --sub H \"b^2\"");
  CHECK(r.code == 0);

  r = run("member --sub Hhat \"b^2 A b^2 a\"");
  CHECK(r.code == 0);

  r = run("member --seq factorial2 --sub Hhat \"b^2\"");
  CHECK(r.code == 1);
}

TEST_CASE("json output carries a schema version") {
  auto r = run("--format json member --sub Hhat \"b^2 A b^2 a\"", false);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["member"] == true);
  CHECK(j["normal_form"] == "b^2 A b^2 a");
}

TEST_CASE("parse and usage errors exit 2") {
  CHECK(run("member c").code == 2);
  CHECK(run("member \"a^\"").code == 2);
  CHECK(run("suite nope").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--seq '{\"rule\":\"explicit\",\"prefix\":[2,3],\"multiplier\":2}' member --sub Hk --k 3 b").code
        == 2);
}

TEST_CASE("cap exceeded exits 3") {
  auto e = persist::factorial(70) * 2;
  auto r = run("separate \"a^" + e.str() + "\"");
  CHECK(r.code == 3);
  CHECK(contains(r.out, "cap exceeded"));
}

TEST_CASE("separate prints a verified completion") {
  auto r = run("--format json separate \"a b\"", false);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["separation_level"] == 1);
  CHECK(j["verified"] == true);

  r = run("separate \"a^6\"");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "separation level 4"));

  CHECK(run("separate --gens \"b^2\" \"b^2\"").code == 1);
  CHECK(run("separate --gens \"b^2\" b").code == 0);
}

TEST_CASE("normal forms") {
  auto r = run("normal-form --level 0 \"a b B a\"", false);
  CHECK(r.code == 0);
  CHECK(r.out == "a^2\n");

  r = run("normal-form --level 1 \"(L b^2)(R B^2)(L a)\"", false);
  CHECK(r.code == 0);
  CHECK(r.out == "(L b^2)(R B^2)(L a)\n");

  r = run("normal-form --level 2 gcheck2", false);
  CHECK(r.code == 0);
  CHECK(r.out == "(R (L A^2 b^4 a^2))\n");
}

TEST_CASE("persistence suite") {
  auto r = run("suite persistence --q 3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "PASS persistence"));
  CHECK(contains(r.out, "q=3"));
}

TEST_CASE("abelianize") {
  auto r = run("--format json abelianize " + data("promislow.pres"), false);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["rank"] == 0);
  CHECK(j["torsion"] == nlohmann::json::array({4, 4}));

  r = run("abelianize " + data("klein.pres"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"rank\":1"));
  CHECK(contains(r.out, "\"torsion\":[2]"));

  CHECK(run("abelianize " + data("missing.pres")).code == 2);
}

TEST_CASE("double presentations") {
  auto r = run("double-pres " + data("klein.pres") + " --sub \"u u,u V\" --gluing swap");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "Z/4 + Z/4"));

  auto f = run("double-pres " + data("klein.pres") + " --sub \"u u,u V\" --gluing file --images "
               + data("swap.images"));
  CHECK(f.code == 0);
  CHECK(contains(f.out, "Z/4 + Z/4"));

  auto c = run("double-pres " + data("klein.pres") + " --sub \"u u,u V\" --gluing canonical");
  CHECK(c.code == 0);
  CHECK(!contains(c.out, "Z/4 + Z/4"));

  CHECK(run("double-pres " + data("klein.pres") + " --sub \"u u,u V\" --gluing file").code == 2);
}

TEST_CASE("upp-check") {
  auto r = run("upp-check " + data("model_failure.set"));
  CHECK(r.code == 0);

  r = run("upp-check --group Z " + data("ints.set"));
  CHECK(r.code == 1);
  CHECK(contains(r.out, "unique product"));

  r = run("upp-check --group Z/2 " + data("z2.set"));
  CHECK(r.code == 0);
}
