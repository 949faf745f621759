#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace folio {

struct SelftestOptions {
  std::uint64_t seed = 0;
  std::size_t cases = 200;
  // Deliberately breaks one transformation so the harness can be tested.
  bool mutant = false;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  std::optional<std::string> counterexample;  // first failure, formula and structure

  bool ok() const { return !counterexample.has_value(); }
};

// Randomized invariant suites: print/parse round trip, equivalence of the
// normal forms and the rewrite, the variable bound, engine agreement and
// exact treewidth. Progress goes to `log`.
SelftestReport run_selftest(const SelftestOptions& opts, std::ostream& log);

}  // namespace folio
