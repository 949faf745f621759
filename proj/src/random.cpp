#include "folio/random.hpp"

#include <algorithm>
#include <set>

namespace folio {

namespace {

using K = Formula::Kind;

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Variable var(std::size_t i) { return Variable{"x" + std::to_string(i + 1)}; }

Formula random_atom(Rng& rng, std::size_t nvars) {
  static const char* unary[] = {"P", "Q"};
  static const char* binary[] = {"E", "F"};
  if (coin(rng, 0.4)) return Formula::atom(unary[pick(rng, 0, 1)], {var(pick(rng, 0, nvars - 1))});
  return Formula::atom(binary[pick(rng, 0, 1)], {var(pick(rng, 0, nvars - 1)), var(pick(rng, 0, nvars - 1))});
}

std::vector<Variable> random_vars(Rng& rng, std::size_t nvars, std::size_t max_count) {
  std::vector<std::size_t> idx(nvars);
  for (std::size_t i = 0; i < nvars; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(pick(rng, 1, std::min(max_count, nvars)));
  std::vector<Variable> out;
  for (std::size_t i : idx) out.push_back(var(i));
  return out;
}

Quantifier random_quantifier(Rng& rng) { return coin(rng, 0.5) ? Quantifier::Exists : Quantifier::Forall; }

Formula grow(Rng& rng, std::size_t atoms, std::size_t nvars, const FormulaShape& shape) {
  Formula f = atoms <= 1 ? random_atom(rng, nvars)
                         : [&] {
                             std::size_t left = pick(rng, 1, atoms - 1);
                             Formula l = grow(rng, left, nvars, shape);
                             Formula r = grow(rng, atoms - left, nvars, shape);
                             return Formula::binary(coin(rng, 0.5) ? K::And : K::Or, l, r);
                           }();
  if (coin(rng, 0.4)) f = Formula::quantified(random_quantifier(rng), random_vars(rng, nvars, 2), f);
  if (shape.allow_negation && coin(rng, 0.2)) f = Formula::negation(f);
  return f;
}

}  // namespace

Signature random_signature() {
  Signature sig;
  sig.add_relation("P", {kDefaultSort});
  sig.add_relation("Q", {kDefaultSort});
  sig.add_relation("E", {kDefaultSort, kDefaultSort});
  sig.add_relation("F", {kDefaultSort, kDefaultSort});
  return sig;
}

Formula random_formula(Rng& rng, const FormulaShape& shape) {
  const std::size_t nvars = pick(rng, 1, std::max<std::size_t>(1, shape.max_variables));
  const std::size_t atoms = pick(rng, 1, std::max<std::size_t>(1, shape.max_atoms));
  Formula f = grow(rng, atoms, nvars, shape);
  if (!shape.sentence) return f;
  VarSet fv = free_vars(f);
  std::vector<Variable> rest(fv.begin(), fv.end());
  std::shuffle(rest.begin(), rest.end(), rng);
  while (!rest.empty()) {
    std::size_t n = pick(rng, 1, rest.size());
    std::vector<Variable> block(rest.end() - static_cast<std::ptrdiff_t>(n), rest.end());
    rest.resize(rest.size() - n);
    f = Formula::quantified(random_quantifier(rng), std::move(block), f);
  }
  return f;
}

Structure random_structure(Rng& rng, const Signature& sig, std::size_t max_size, double density) {
  Structure s(sig);
  for (const auto& sort : sig.sorts()) {
    std::size_t n = pick(rng, 1, std::max<std::size_t>(1, max_size));
    std::vector<Element> u;
    for (std::size_t i = 0; i < n; ++i) u.push_back(std::to_string(i + 1));
    s.set_universe(sort, std::move(u));
  }
  for (const auto& [name, arity] : sig.relations()) {
    std::set<Tuple> rows;
    for (const auto& t : s.full_relation(name))
      if (coin(rng, density)) rows.insert(t);
    s.set_relation(name, std::move(rows));
  }
  return s;
}

Graph random_graph(Rng& rng, std::size_t n, double p) {
  std::string text;
  for (std::size_t i = 0; i < n; ++i) text += "v" + std::to_string(i) + "\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng, p)) text += "v" + std::to_string(i) + " v" + std::to_string(j) + "\n";
  return parse_edge_list(text);
}

Hypergraph random_hypergraph(Rng& rng, std::size_t vertices, std::size_t edges, std::size_t max_edge) {
  VertexSet all;
  for (std::size_t i = 0; i < vertices; ++i) all.insert("v" + std::to_string(i));
  std::vector<VertexSet> es;
  for (std::size_t e = 0; e < edges; ++e) {
    VertexSet edge;
    std::size_t size = pick(rng, 1, std::max<std::size_t>(1, max_edge));
    for (std::size_t i = 0; i < size; ++i) edge.insert("v" + std::to_string(pick(rng, 0, vertices - 1)));
    es.push_back(std::move(edge));
  }
  return Hypergraph(std::move(all), std::move(es));
}

Formula f_k(std::size_t k) {
  if (k == 0) throw PreconditionError("f_k needs k >= 1");
  std::vector<Variable> ys;
  std::vector<Formula> atoms;
  const Variable x{"x"};
  for (std::size_t i = 1; i <= k; ++i) {
    Variable y{"y" + std::to_string(i)};
    ys.push_back(y);
    atoms.push_back(Formula::atom("E" + std::to_string(i), {y, x}));
  }
  return Formula::quantified(Quantifier::Forall, ys, Formula::quantified(Quantifier::Exists, {x}, conjoin(atoms)));
}

std::pair<Block, EliminationOrdering> random_block(Rng& rng) {
  Block b;
  b.quantifier = random_quantifier(rng);
  const std::size_t nfree = pick(rng, 0, 2);
  const std::size_t nbound = pick(rng, 1, 4);
  std::vector<Variable> frees, all;
  for (std::size_t i = 0; i < nfree; ++i) frees.push_back({"u" + std::to_string(i + 1)});
  for (std::size_t i = 0; i < nbound; ++i) b.vars.push_back({"v" + std::to_string(i + 1)});
  all = frees;
  all.insert(all.end(), b.vars.begin(), b.vars.end());
  auto any = [&] { return all[pick(rng, 0, all.size() - 1)]; };
  const std::size_t nkids = pick(rng, 1, 5);
  for (std::size_t i = 0; i < nkids; ++i) {
    Formula kid = coin(rng, 0.3) ? Formula::atom("P" + std::to_string(i), {any()})
                                 : Formula::atom("E" + std::to_string(i), {any(), any()});
    if (coin(rng, 0.3)) {
      Variable z{"z" + std::to_string(i)};
      kid = Formula::quantified(dual(b.quantifier), {z},
                                Formula::binary(b.quantifier == Quantifier::Exists ? K::Or : K::And, kid,
                                                Formula::atom("R" + std::to_string(i), {z, any()})));
    }
    if (coin(rng, 0.2)) kid = Formula::negation(kid);
    b.children.push_back(kid);
  }
  // Free variables of the block are exactly those of `frees` that occur.
  std::vector<Vertex> free_order, bound_order;
  for (const auto& v : b.free()) free_order.push_back(v.name);
  for (const auto& v : b.vars) bound_order.push_back(v.name);
  std::shuffle(free_order.begin(), free_order.end(), rng);
  std::shuffle(bound_order.begin(), bound_order.end(), rng);
  free_order.insert(free_order.end(), bound_order.begin(), bound_order.end());
  EliminationOrdering e = ordering_with_fill(primal_graph(block_hypergraph(b)), std::move(free_order));
  return {std::move(b), std::move(e)};
}

}  // namespace folio
