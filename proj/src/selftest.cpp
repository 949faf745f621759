#include "folio/selftest.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>

#include "folio/engine.hpp"
#include "folio/normalize.hpp"
#include "folio/parser.hpp"
#include "folio/random.hpp"
#include "folio/thickness.hpp"

namespace folio {

namespace {

std::size_t brute_force_treewidth(const Hypergraph& h) {
  SimpleGraph g = primal_graph(h);
  std::vector<Vertex> order(g.vertices.begin(), g.vertices.end());
  if (order.empty()) return 0;
  std::size_t best = order.size();
  do {
    best = std::min(best, lower_degree(ordering_with_fill(g, order)));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Swaps the first conjunction for a disjunction.
Formula break_formula(const Formula& f) {
  using K = Formula::Kind;
  std::function<std::optional<Formula>(const Formula&)> rec = [&](const Formula& g) -> std::optional<Formula> {
    if (g.kind() == K::And) return Formula::disjunction(g.left(), g.right());
    for (std::size_t i = 0; i < g.child_count(); ++i) {
      if (auto r = rec(g.child_at(i))) return replace_at(g, {i}, *r);
    }
    return std::nullopt;
  };
  auto r = rec(f);
  return r ? *r : f;
}

std::size_t names_used(const Formula& f) {
  std::set<std::string> names;
  for (const auto& v : all_vars(f)) names.insert(v.name);
  return names.size();
}

class Harness {
 public:
  Harness(std::ostream& log, SelftestReport& report) : log_(log), report_(report) {}

  // Input of the running case, reported when the case throws.
  void note(const Formula& f) { context_ = print_formula(f); }

  void suite(const std::string& name, std::size_t cases, const std::function<std::optional<std::string>(std::size_t)>& body) {
    SuiteResult r{name, 0, 0};
    for (std::size_t i = 0; i < cases; ++i) {
      ++r.cases;
      std::optional<std::string> failure;
      context_.clear();
      try {
        failure = body(i);
      } catch (const std::exception& e) {
        failure = std::string("exception: ") + e.what() + (context_.empty() ? "" : " on " + context_);
      }
      if (failure) {
        ++r.failures;
        if (!report_.counterexample) report_.counterexample = name + " case " + std::to_string(i) + ": " + *failure;
      }
    }
    log_ << (r.failures == 0 ? "ok   " : "FAIL ") << name << " (" << r.cases << " cases, " << r.failures
         << " failures)\n";
    report_.suites.push_back(r);
  }

 private:
  std::ostream& log_;
  SelftestReport& report_;
  std::string context_;
};

std::string describe(const Formula& f, const Structure& s) {
  return "formula " + print_formula(f) + " on structure " + structure_to_json(s).dump();
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& opts, std::ostream& log) {
  SelftestReport report;
  if (opts.cases == 0) {
    log << "warning: --cases 0 runs nothing; the selftest passes vacuously\n";
    return report;
  }
  Rng rng(opts.seed);
  Harness h(log, report);
  const Signature sig = random_signature();

  h.suite("print/parse round trip", opts.cases, [&](std::size_t) -> std::optional<std::string> {
    FormulaShape shape;
    shape.sentence = false;
    Formula f = random_formula(rng, shape);
    Formula back = parse_formula(print_formula(f), sig);
    if (!(back == f)) return "round trip changed " + print_formula(f) + " into " + print_formula(back);
    return std::nullopt;
  });

  h.suite("normal forms and rewrite agree with naive_eval", opts.cases, [&](std::size_t) -> std::optional<std::string> {
    Formula f = random_formula(rng);
    h.note(f);
    Formula org = organize(f);
    Formula layered = lay(f);
    Formula minimized = minimize_variables(f);
    if (opts.mutant) layered = break_formula(layered);
    for (int t = 0; t < 3; ++t) {
      Structure s = random_structure(rng, sig, 3);
      bool expected = naive_eval(s, f);
      if (naive_eval(s, org) != expected) return "organize differs: " + describe(f, s);
      if (naive_eval(s, layered) != expected) return "lay differs: " + describe(f, s);
      if (naive_eval(s, minimized) != expected) return "minimize_variables differs: " + describe(f, s);
    }
    return std::nullopt;
  });

  h.suite("rewrite uses at most thickness many variables", opts.cases, [&](std::size_t) -> std::optional<std::string> {
    Formula f = random_formula(rng);
    h.note(f);
    std::size_t t = thickness(f);
    Formula m = minimize_variables(f);
    if (names_used(m) > t)
      return print_formula(f) + " has thickness " + std::to_string(t) + " but the rewrite " + print_formula(m) +
             " uses " + std::to_string(names_used(m)) + " variables";
    return std::nullopt;
  });

  h.suite("engines agree with naive_eval", opts.cases, [&](std::size_t) -> std::optional<std::string> {
    FormulaShape shape;
    shape.max_variables = 4;
    Formula f = random_formula(rng, shape);
    h.note(f);
    Structure s = random_structure(rng, sig, 4);
    bool expected = naive_eval(s, f);
    if (bounded_var_eval(s, f).truth() != expected) return "bounded engine differs: " + describe(f, s);
    if (fpt_model_check(s, f).value != expected) return "fpt engine differs: " + describe(f, s);
    return std::nullopt;
  });

  h.suite("treewidth matches brute force", opts.cases, [&](std::size_t) -> std::optional<std::string> {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    Hypergraph hg = random_hypergraph(rng, n, n + 1, 3);
    std::size_t fast = treewidth(hg);
    std::size_t slow = brute_force_treewidth(hg);
    if (fast != slow)
      return "treewidth " + std::to_string(fast) + " but brute force gives " + std::to_string(slow) + " for " +
             to_dot(hg);
    return std::nullopt;
  });

  return report;
}

}  // namespace folio
