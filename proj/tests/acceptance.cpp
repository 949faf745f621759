// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "folio/engine.hpp"
#include "folio/gadgets.hpp"
#include "folio/normalize.hpp"
#include "folio/parser.hpp"
#include "folio/random.hpp"
#include "folio/thickness.hpp"
#include "oracles.hpp"

using namespace folio;
using Clock = std::chrono::steady_clock;
using K = Formula::Kind;

namespace {

constexpr std::uint64_t kSeed = 20240229;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f s", seconds_since(start));
  std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.detail << " (" << secs << ")"
            << std::endl;
  if (!o.pass) ++failures;
}

std::vector<Formula> seeded_sentences(std::size_t n) {
  Rng rng(kSeed);
  FormulaShape shape;
  shape.max_variables = 5;
  shape.max_atoms = 4;
  std::vector<Formula> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_formula(rng, shape));
  return out;
}

// Gives every atom occurrence its own relation symbol. Returns nothing when an
// atom repeats a variable.
std::optional<Formula> distinct_symbols(const Formula& f, const std::map<std::string, std::string>& sort_of = {}) {
  std::size_t next = 0;
  bool ok = true;
  auto resort = [&](Variable v) {
    if (auto it = sort_of.find(v.name); it != sort_of.end()) v.sort = it->second;
    return v;
  };
  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case K::Atom: {
        std::set<std::string> seen;
        std::vector<Variable> args;
        for (const auto& v : g.args()) {
          ok = ok && seen.insert(v.name).second;
          args.push_back(resort(v));
        }
        return Formula::atom("R" + std::to_string(++next), std::move(args));
      }
      case K::Not:
        return Formula::negation(rec(g.child()));
      case K::And:
      case K::Or: {
        Formula l = rec(g.left());
        Formula r = rec(g.right());
        return Formula::binary(g.kind(), l, r);
      }
      case K::Quant: {
        std::vector<Variable> vars;
        for (const auto& v : g.bound()) vars.push_back(resort(v));
        return Formula::quantified(g.quantifier(), std::move(vars), rec(g.child()));
      }
    }
    return g;
  };
  Formula out = rec(f);
  if (!ok) return std::nullopt;
  return out;
}

Outcome thickness_fixture() {
  auto start = Clock::now();
  std::ostringstream got;
  bool ok = true;
  for (std::size_t k = 1; k <= 5; ++k) {
    std::size_t t = thickness(f_k(k));
    got << (k > 1 ? " " : "") << t;
    ok = ok && t == k + 1;
  }
  double s = seconds_since(start);
  return {ok && s < 10, "thick(F_1..F_5) = " + got.str() + ", expected 2 3 4 5 6"};
}

Outcome variable_bound() {
  auto start = Clock::now();
  std::size_t violations = 0;
  std::string first;
  for (const auto& f : seeded_sentences(1000)) {
    Formula m = minimize_variables(f);
    if (oracle::variable_names(m).size() > thickness(f)) {
      if (!violations) first = "; first: " + print_formula(f);
      ++violations;
    }
  }
  double s = seconds_since(start);
  return {violations == 0 && s < 300, std::to_string(violations) + " violations in 1000 sentences" + first};
}

Outcome oracle_equivalence() {
  auto start = Clock::now();
  Rng rng(kSeed + 1);
  const Signature sig = random_signature();
  std::size_t checks = 0, disagreements = 0;
  std::string first;
  for (const auto& f : seeded_sentences(1000)) {
    Formula org = organize(f);
    Formula laid = lay(f);
    Formula min = minimize_variables(f);
    for (int t = 0; t < 3; ++t) {
      Structure s = random_structure(rng, sig, 3);
      const bool expected = naive_eval(s, f);
      const bool got[] = {naive_eval(s, org), naive_eval(s, laid), naive_eval(s, min), bounded_var_eval(s, f).truth(),
                          fpt_model_check(s, f).value};
      for (bool g : got) {
        ++checks;
        if (g != expected) {
          if (!disagreements) first = "; first: " + print_formula(f);
          ++disagreements;
        }
      }
    }
  }
  double s = seconds_since(start);
  return {disagreements == 0 && s < 600,
          std::to_string(disagreements) + " disagreements in " + std::to_string(checks) + " comparisons" + first};
}

Outcome elimination_width_bound() {
  Rng rng(kSeed + 2);
  std::size_t steps = 0, violations = 0, plain_exceed = 0;
  for (int i = 0; i < 500; ++i) {
    auto [b, e] = random_block(rng);
    while (!b.vars.empty()) {
      std::size_t child_width = 0, child_plain = 0;
      for (const auto& c : b.children) {
        child_width = std::max(child_width, block_width(c));
        child_plain = std::max(child_plain, width(c));
      }
      const std::size_t bound = std::max(1 + lower_degree(e), child_width);
      auto [next, rest] = eliminate_last_variable(b, e);
      ++steps;
      const Formula result = next.to_formula();
      if (block_width(result) > bound) ++violations;
      if (width(result) > std::max(1 + lower_degree(e), child_plain)) ++plain_exceed;
      b = std::move(next);
      e = std::move(rest);
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(steps) +
                               " steps on 500 blocks (block width; node-by-node width exceeds the bound in " +
                               std::to_string(plain_exceed) + " steps)"};
}

Hypergraph graph_of(const std::vector<std::pair<int, int>>& edges, int n) {
  std::vector<VertexSet> es;
  for (int v = 0; v < n; ++v) es.push_back({"v" + std::to_string(v)});
  for (auto [a, b] : edges) es.push_back({"v" + std::to_string(a), "v" + std::to_string(b)});
  return Hypergraph(std::move(es));
}

Outcome treewidth_exactness() {
  Rng rng(kSeed + 3);
  std::size_t wrong = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    Hypergraph h = random_hypergraph(rng, n, std::uniform_int_distribution<std::size_t>(0, 2 * n)(rng), 3);
    ++total;
    if (treewidth(h) != oracle::treewidth(h)) ++wrong;
  }
  auto expect = [&](const Hypergraph& h, std::size_t tw) {
    ++total;
    if (treewidth(h) != tw) ++wrong;
  };
  for (int k = 2; k <= 6; ++k) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) e.push_back({a, b});
    expect(graph_of(e, k), k - 1);
  }
  for (int n = 2; n <= 7; ++n) {
    std::vector<std::pair<int, int>> path, cycle;
    for (int a = 0; a + 1 < n; ++a) path.push_back({a, a + 1});
    expect(graph_of(path, n), 1);
    if (n >= 3) {
      cycle = path;
      cycle.push_back({n - 1, 0});
      expect(graph_of(cycle, n), 2);
    }
  }
  std::vector<std::pair<int, int>> grid;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if (r < 2) grid.push_back({3 * r + c, 3 * (r + 1) + c});
      if (c < 2) grid.push_back({3 * r + c, 3 * r + c + 1});
    }
  expect(graph_of(grid, 9), 3);
  return {wrong == 0, std::to_string(wrong) + " mismatches in " + std::to_string(total) + " graphs"};
}

Outcome prefix_property() {
  Rng rng(kSeed + 4);
  std::size_t wrong = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    Hypergraph h = random_hypergraph(rng, n, std::uniform_int_distribution<std::size_t>(1, 2 * n)(rng), 3);
    const VertexSet f = h.edges()[std::uniform_int_distribution<std::size_t>(0, h.edges().size() - 1)(rng)];
    EliminationOrdering e = elimination_ordering_with_prefix(h, f);
    bool ok = VertexSet(e.order.begin(), e.order.begin() + static_cast<std::ptrdiff_t>(f.size())) == f &&
              is_valid_ordering(primal_graph(h), e) && lower_degree(e) == oracle::treewidth(h);
    if (!ok) ++wrong;
  }
  return {wrong == 0, std::to_string(wrong) + " failures in 200 hypergraphs"};
}

Outcome clique_gadget_agreement() {
  Rng rng(kSeed + 5);
  const std::vector<Formula> thetas = {
      parse_formula("exists x1 x2 x3 x4. (F1(x1,x2) & F2(x1,x3) & F3(x1,x4) & F4(x2,x3) & F5(x2,x4) & F6(x3,x4))"),
      parse_formula("exists y. (P(y) & (exists x1 x2 x3 x4. (F1(x1,x2,x3) & F2(x1,x4) & F3(x2,x4) & F4(x3,x4) & "
                    "G(y,x1))))"),
  };
  std::size_t yes = 0, no = 0, wrong = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(2, 7)(rng);
    double p = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
    Graph g = random_graph(rng, n, p);
    for (std::size_t k : {2u, 3u, 4u}) {
      const Formula& theta = thetas[static_cast<std::size_t>(i) % thetas.size()];
      const bool expected = oracle::has_clique(g, k);
      (expected ? yes : no) += 1;
      if (fpt_model_check(clique_gadget(k, theta, g), theta).value != expected) ++wrong;
    }
  }
  return {wrong == 0 && yes >= 30 && no >= 30, std::to_string(wrong) + " disagreements in 600 instances (" +
                                                   std::to_string(yes) + " with a clique, " + std::to_string(no) +
                                                   " without)"};
}

// A sentence with one simple subformula over private sort V, inside a random
// context over sort U. inner is the quantifier of the simple subformula.
std::pair<Formula, Path> accordion_sentence(Rng& rng, Quantifier inner) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t nw = pick(2, 3), nv = pick(1, 2);
  std::vector<Variable> ws, vs;
  for (std::size_t i = 1; i <= nw; ++i) ws.push_back({"w" + std::to_string(i), kDefaultSort});
  for (std::size_t i = 1; i <= nv; ++i) vs.push_back({"v" + std::to_string(i), "V"});
  std::vector<Formula> atoms;
  const std::size_t na = pick(2, 3);
  std::size_t sym = 0;
  for (std::size_t i = 0; i < na; ++i) {
    const Variable& v = vs[i % nv];
    const Variable& w = ws[i % nw];
    if (pick(0, 3) == 0 && nv > 1)
      atoms.push_back(Formula::atom("R" + std::to_string(++sym), {vs[0], vs[1], w}));
    else
      atoms.push_back(Formula::atom("R" + std::to_string(++sym), {w, v}));
  }
  Formula simple = Formula::quantified(inner, vs, combine(inner == Quantifier::Exists ? K::And : K::Or, atoms));
  Formula other = Formula::atom("T", {ws[pick(0, nw - 1)]});
  Formula body = pick(0, 1) ? Formula::conjunction(simple, other) : Formula::disjunction(simple, other);
  Path path{0};
  if (pick(0, 1)) {
    body = Formula::conjunction(body, Formula::atom("S", {ws[0], ws[nw - 1]}));
    path.insert(path.begin(), 0);
  }
  Formula f = body;
  for (std::size_t i = nw; i-- > 0;) {
    f = Formula::quantified(pick(0, 1) ? Quantifier::Exists : Quantifier::Forall, {ws[i]}, f);
    path.insert(path.begin(), 0);
  }
  return {f, path};
}

Outcome accordion_steps() {
  Rng rng(kSeed + 6);
  std::size_t wrong = 0, bound_fired = 0;
  std::size_t per_case[4] = {0, 0, 0, 0};
  for (int i = 0; i < 50; ++i) {
    const int which = i % 3 + 1;
    Quantifier q = which == 3 ? Quantifier::Forall : Quantifier::Exists;
    if (which == 1 && i % 2) q = Quantifier::Forall;
    auto [phi, path] = accordion_sentence(rng, q);
    Formula psi = which == 1 ? based_sentence(phi, path) : make_accordion_pair(phi, path);
    Structure a = random_structure(rng, infer_signature(psi), 3);
    try {
      AccordionResult r = accordion_step(psi, phi, a);
      ++per_case[static_cast<int>(r.which)];
      if (naive_eval(a, psi) != naive_eval(r.structure, phi)) ++wrong;
      if (r.measure_out > r.measure_bound) ++bound_fired;
    } catch (const Error& e) {
      if (std::string(e.what()).find("measure bound") != std::string::npos)
        ++bound_fired;
      else
        throw Error(std::string(e.what()) + " on psi " + print_formula(psi) + ", phi " + print_formula(phi));
    }
  }
  bool covered = per_case[1] && per_case[2] && per_case[3];
  return {wrong == 0 && bound_fired == 0 && covered,
          std::to_string(wrong) + " disagreements in 50 triples (cases 1/2/3: " + std::to_string(per_case[1]) + "/" +
              std::to_string(per_case[2]) + "/" + std::to_string(per_case[3]) + "), measure bound fired " +
              std::to_string(bound_fired) + " times"};
}

Formula deep_chain() {
  std::vector<Variable> xs;
  std::vector<Formula> atoms;
  Variable prev{"y"};
  for (int i = 1; i <= 5; ++i) {
    Variable x{"x" + std::to_string(i)};
    atoms.push_back(Formula::atom("E", {prev, x}));
    xs.push_back(x);
    prev = x;
  }
  return Formula::quantified(Quantifier::Forall, {Variable{"y"}},
                             Formula::quantified(Quantifier::Exists, xs, conjoin(atoms)));
}

Structure random_digraph(Rng& rng, std::size_t n, double p) {
  Signature sig;
  sig.add_relation("E", {kDefaultSort, kDefaultSort});
  Structure s(sig);
  std::vector<Element> u;
  for (std::size_t i = 0; i < n; ++i) u.push_back(std::to_string(i));
  s.set_universe(kDefaultSort, u);
  std::set<Tuple> e;
  for (const auto& a : u)
    for (const auto& b : u)
      if (std::bernoulli_distribution(p)(rng)) e.insert({a, b});
  s.set_relation("E", std::move(e));
  return s;
}

template <typename F>
double timed(F&& f) {
  auto start = Clock::now();
  f();
  return seconds_since(start);
}

Outcome scaling() {
  Rng rng(kSeed + 7);
  const Formula f = deep_chain();
  Structure big = random_digraph(rng, 200, 10.0 / 200);
  Structure small = random_digraph(rng, 30, 4.0 / 30);
  bool v_big = false, v_fpt = false, v_naive = false;
  const double t_big = timed([&] { v_big = fpt_model_check(big, f).value; });
  const double t_fpt = timed([&] { v_fpt = fpt_model_check(small, f).value; });
  const double t_naive = timed([&] { v_naive = naive_eval(small, f); });
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "fpt on |B|=200: %.3f s (value %d); |B|=30 (value %d): fpt %.4f s, naive %.3f s, ratio %.0f", t_big,
                v_big, v_naive, t_fpt, t_naive, t_naive / std::max(t_fpt, 1e-9));
  return {t_big < 2 && t_naive > 60 * t_fpt && v_fpt == v_naive, buf};
}

Outcome collapse_and_complement() {
  Rng rng(kSeed + 8);
  std::size_t collapse_done = 0, complement_done = 0, wrong = 0;
  while (collapse_done < 100) {
    auto psi = distinct_symbols(random_formula(rng));
    if (!psi) continue;
    Formula full = full_sort(*psi);
    Structure s = random_structure(rng, infer_signature(full), 3);
    if (naive_eval(collapse_sorts(*psi, s), *psi) != naive_eval(s, full)) ++wrong;
    ++collapse_done;
  }
  while (complement_done < 100) {
    Formula base = nnf(random_formula(rng));
    std::map<std::string, std::string> sorts;
    for (const auto& v : all_vars(base)) sorts[v.name] = std::bernoulli_distribution(0.5)(rng) ? "A" : "B";
    auto phi = distinct_symbols(base, sorts);
    if (!phi) continue;
    Structure s = random_structure(rng, infer_signature(*phi), 3);
    auto [psi, t] = complement_structure(*phi, s);
    if (!is_positive(psi) || naive_eval(s, *phi) != naive_eval(t, psi)) ++wrong;
    ++complement_done;
  }
  return {wrong == 0, std::to_string(wrong) + " disagreements in 100 collapse and 100 complement instances"};
}

}  // namespace

int main() {
  criterion(1, "thickness fixture", thickness_fixture);
  criterion(2, "variable-minimization bound", variable_bound);
  criterion(3, "oracle equivalence", oracle_equivalence);
  criterion(4, "elimination width bound", elimination_width_bound);
  criterion(5, "treewidth exactness", treewidth_exactness);
  criterion(6, "elimination-ordering prefix property", prefix_property);
  criterion(7, "clique gadget", clique_gadget_agreement);
  criterion(8, "accordion step", accordion_steps);
  criterion(9, "scaling sanity", scaling);
  criterion(10, "sort collapse and complementation", collapse_and_complement);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
