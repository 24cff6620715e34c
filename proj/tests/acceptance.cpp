// One PASS/FAIL line per acceptance criterion.  Exit status is nonzero only
// when a criterion outside the known-failing set fails.

#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "persist/suites.hpp"

namespace {

  struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> suites;
    double budget_seconds;
  };

  // Criterion 2 asks every even-parity H element to lie in every Hhat_k.
  // That is false (g_0 g_2 is in H_1 but not in Hhat_1), so the suite
  // reports failures by design.
  std::set<int> const known_failing = {2};

}  // namespace

int main() {
  using namespace persist;

  RunConfig cfg;
  cfg.apply_environment();

  std::vector<Criterion> const criteria = {
      {1, "membership anchors", {"membership"}, 1},
      {2, "factoring through summaries", {"factoring"}, 30},
      {3, "separation witnesses", {"separation"}, 30},
      {4, "centralizer", {"centralizer"}, 60},
      {5, "Yhat membership oracle", {"yhat"}, 60},
      {6, "Klein, torus and injection", {"klein", "torus", "injection"}, 120},
      {7, "persistence and coset powers", {"persistence", "coset"}, 120},
      {8, "abelianization probes", {"abelianization"}, 1},
      {9, "crystallographic model", {"model"}, 30},
      {10, "unique products", {"upp"}, 1e9},
      {11, "RF certificates", {"rf"}, 120},
  };
  double const certificate_budget = 1.0;

  std::vector<int> failed;
  std::vector<int> unexpected;
  for (auto const& c : criteria) {
    bool ok        = true;
    double seconds = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string note;
    for (auto const& name : c.suites) {
      SuiteReport r;
      try {
        r = run_suite(name, cfg);
      } catch (std::exception const& e) {
        ok = false;
        note += " " + name + " threw: " + e.what();
        continue;
      }
      seconds += r.seconds;
      checks += r.checks;
      failures += r.failures;
      if (!r.passed()) {
        ok = false;
        if (!r.failure_examples.empty()) {
          note += " " + name + ": " + r.failure_examples.front();
        }
      }
      if (name == "upp") {
        double cert = r.details.value("certificate_seconds", 1e9);
        if (cert >= certificate_budget) {
          ok = false;
          note += " certificate check took " + std::to_string(cert) + " s";
        }
      }
    }
    if (seconds >= c.budget_seconds) {
      ok = false;
      note += " over budget";
    }
    std::printf("criterion %d: %s %s (%zu checks, %zu failures, %.2f s)%s\n", c.id, ok ? "PASS" : "FAIL",
                c.title.c_str(), checks, failures, seconds, note.c_str());
    std::fflush(stdout);
    if (!ok) {
      failed.push_back(c.id);
      if (!known_failing.count(c.id)) {
        unexpected.push_back(c.id);
      }
    }
  }

  std::string list;
  for (int id : failed) {
    list += (list.empty() ? "" : ",") + std::to_string(id);
  }
  std::printf("summary: %zu/%zu passed; failed [%s]; unexpected failures %zu\n", criteria.size() - failed.size(),
              criteria.size(), list.c_str(), unexpected.size());
  return unexpected.empty() ? 0 : 1;
}
