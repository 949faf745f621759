#include "folio/gadgets.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "folio/normalize.hpp"

namespace folio {

namespace {

using K = Formula::Kind;

K connective_of(Quantifier q) { return q == Quantifier::Exists ? K::And : K::Or; }

SortWord sort_word(const Formula& atom) {
  SortWord w;
  for (const auto& v : atom.args()) w.push_back(v.sort);
  return w;
}

void for_each_tuple(const std::vector<const std::vector<Element>*>& domains,
                    const std::function<void(const Tuple&)>& visit) {
  for (const auto* d : domains)
    if (d->empty()) return;
  std::vector<std::size_t> idx(domains.size(), 0);
  Tuple t(domains.size());
  while (true) {
    for (std::size_t i = 0; i < idx.size(); ++i) t[i] = (*domains[i])[idx[i]];
    visit(t);
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < domains[i]->size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (idx.empty()) return;
  }
}

std::set<Tuple> relation_where(const Structure& s, const SortWord& arity, const std::function<bool(const Tuple&)>& keep) {
  std::vector<const std::vector<Element>*> domains;
  for (const auto& sort : arity) domains.push_back(&s.universe(sort));
  std::set<Tuple> out;
  for_each_tuple(domains, [&](const Tuple& t) {
    if (keep(t)) out.insert(t);
  });
  return out;
}

std::set<std::string> symbols_of(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (g.is_atom()) {
      out.insert(g.relation());
      return;
    }
    for (std::size_t i = 0; i < g.child_count(); ++i) rec(g.child_at(i));
  };
  rec(f);
  return out;
}

// Copies `base` and makes sure every sort and symbol of `sig` is present.
Structure widen(const Structure& base, const Signature& sig) {
  Structure out = base;
  for (const auto& sort : sig.sorts()) {
    if (!out.signature().has_sort(sort) || out.universe(sort).empty()) out.set_universe(sort, {kFillerElement});
  }
  for (const auto& [name, arity] : sig.relations()) {
    if (!out.signature().has_relation(name)) out.declare_relation(name, arity);
    else if (out.signature().arity(name) != arity)
      throw SignatureError("relation '" + name + "' has a different arity in the structure");
  }
  return out;
}

// Interprets every atom of f so that f takes the constant value `value`.
void force_value(const Formula& f, bool value, Structure& s) {
  switch (f.kind()) {
    case K::Atom:
      s.set_relation(f.relation(), value ? s.full_relation(f.relation()) : std::set<Tuple>{});
      return;
    case K::Not:
      force_value(f.child(), !value, s);
      return;
    case K::And:
    case K::Or:
      force_value(f.left(), value, s);
      force_value(f.right(), value, s);
      return;
    case K::Quant:
      force_value(f.child(), value, s);
      return;
  }
}

// Collapses the context of the subformula at `path`: afterwards phi is
// equivalent to the quantifier prefix along the path applied to that subformula.
Structure fill_context(const Formula& phi, const Path& path, const Structure& base, bool through_quantifiers) {
  if (!is_symbol_loose(phi)) throw PreconditionError("formula must be symbol-loose: " + print_formula(phi));
  const Formula& sub = subformula_at(phi, path);
  const std::set<std::string> inside = symbols_of(sub);
  for (const auto& sym : inside)
    if (!base.signature().has_relation(sym))
      throw PreconditionError("structure does not interpret '" + sym + "' of the subformula");
  Structure out = widen(base, infer_signature(phi));
  const Formula* node = &phi;
  for (std::size_t step : path) {
    if (node->is_binary()) {
      force_value(node->child_at(1 - step), node->kind() == K::And, out);
    } else if (node->kind() != K::Quant || !through_quantifiers) {
      throw PreconditionError("subformula at " + path_to_string(path) + " is not positively combined");
    }
    node = &node->child_at(step);
  }
  return out;
}

bool all_atoms(const std::vector<Formula>& members) {
  return std::all_of(members.begin(), members.end(), [](const Formula& m) { return m.is_atom(); });
}

std::vector<Formula> members_of(const Formula& simple) {
  return flatten(simple.child(), connective_of(simple.quantifier()));
}

std::vector<std::pair<Variable, Variable>> all_pairs(const VarSet& vars) {
  std::vector<std::pair<Variable, Variable>> out;
  for (auto a = vars.begin(); a != vars.end(); ++a)
    for (auto b = std::next(a); b != vars.end(); ++b) out.emplace_back(*a, *b);
  return out;
}

std::string composite(const std::string& symbol, const std::string& var, const Element& a) {
  return symbol + kCompositeDelimiter + var + kCompositeDelimiter + a;
}

// Locates the single position where phi and psi differ, if any.
std::optional<Path> difference(const Formula& phi, const Formula& psi) {
  if (phi == psi) return std::nullopt;
  Path path;
  const Formula* a = &phi;
  const Formula* b = &psi;
  while (true) {
    bool same_label = a->kind() == b->kind() && !a->is_atom() && a->child_count() == b->child_count();
    if (same_label && a->kind() == K::Quant)
      same_label = a->quantifier() == b->quantifier() &&
                   std::equal(a->bound().begin(), a->bound().end(), b->bound().begin(), b->bound().end());
    if (!same_label) return path;
    std::vector<std::size_t> differing;
    for (std::size_t i = 0; i < a->child_count(); ++i)
      if (!(a->child_at(i) == b->child_at(i))) differing.push_back(i);
    if (differing.size() != 1) return path;
    path.push_back(differing[0]);
    a = &a->child_at(differing[0]);
    b = &b->child_at(differing[0]);
  }
}

struct PairAtom {
  std::string symbol;
  Variable first;
  Variable second;
};

// Builds the relations of the disjunction case on `out`, whose universes for
// the free variables' sorts are already set.
void build_disjunction_case(const Formula& simple, const std::vector<PairAtom>& pairs, const Structure& a,
                            Structure& out) {
  const std::vector<Formula> atoms = members_of(simple);
  const std::vector<Variable> bound(simple.bound().begin(), simple.bound().end());
  auto in_v = [&](const Variable& v) { return std::find(bound.begin(), bound.end(), v) != bound.end(); };

  struct Code {
    std::size_t pair;
    Variable var;
    Element value;
  };
  std::vector<Element> bv;
  std::map<Element, Code> decode;
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    for (const Variable& u : {pairs[l].first, pairs[l].second}) {
      for (const auto& e : a.universe(u.sort)) {
        Element c = composite(pairs[l].symbol, u.name, e);
        bv.push_back(c);
        decode[c] = {l, u, e};
      }
    }
  }
  std::set<std::string> vsorts;
  for (const auto& v : bound) vsorts.insert(v.sort);
  for (const auto& sort : vsorts) out.set_universe(sort, bv);

  for (const auto& atom : atoms) {
    std::vector<std::size_t> vpos, fpos;
    for (std::size_t i = 0; i < atom.args().size(); ++i) (in_v(atom.args()[i]) ? vpos : fpos).push_back(i);
    if (vpos.empty())
      throw PreconditionError("atom " + print_formula(atom) + " has no quantified variable of its block");
    std::set<Tuple> rel = relation_where(out, sort_word(atom), [&](const Tuple& t) {
      const Element& b = t[vpos[0]];
      for (std::size_t p : vpos)
        if (t[p] != b) return false;
      const Code& code = decode.at(b);
      const PairAtom& pa = pairs[code.pair];
      for (std::size_t p : fpos) {
        const Variable& uj = atom.args()[p];
        if (uj == code.var) {
          if (t[p] != code.value) return false;
        } else if ((uj == pa.first && code.var == pa.second) || (uj == pa.second && code.var == pa.first)) {
          Tuple e = uj == pa.second ? Tuple{code.value, t[p]} : Tuple{t[p], code.value};
          if (!a.relation(pa.symbol).count(e)) return false;
        }
      }
      return true;
    });
    out.set_relation(atom.relation(), std::move(rel));
  }
}

std::optional<std::vector<PairAtom>> match_pairs(const Formula& replacement, const Formula& simple,
                                                 const Formula& phi, const Formula& psi) {
  const K conn = simple.quantifier() == Quantifier::Exists ? K::Or : K::And;
  std::vector<PairAtom> out;
  std::set<std::pair<Variable, Variable>> seen;
  std::set<std::string> symbols;
  for (const auto& m : flatten(replacement, conn)) {
    if (!m.is_atom() || m.args().size() != 2 || m.args()[0] == m.args()[1]) return std::nullopt;
    auto key = std::minmax(m.args()[0], m.args()[1]);
    if (!seen.insert({key.first, key.second}).second) return std::nullopt;
    if (!symbols.insert(m.relation()).second) return std::nullopt;
    out.push_back({m.relation(), m.args()[0], m.args()[1]});
  }
  std::set<std::pair<Variable, Variable>> expected;
  for (const auto& [x, y] : all_pairs(free_vars(simple))) expected.insert({x, y});
  if (seen != expected) return std::nullopt;
  // Fresh symbols appear nowhere else.
  const std::set<std::string> in_phi = symbols_of(phi);
  std::map<std::string, int> uses;
  std::function<void(const Formula&)> count = [&](const Formula& g) {
    if (g.is_atom()) ++uses[g.relation()];
    for (std::size_t i = 0; i < g.child_count(); ++i) count(g.child_at(i));
  };
  count(psi);
  for (const auto& s : symbols)
    if (in_phi.count(s) || uses[s] != 1) throw PreconditionError("symbol '" + s + "' is not fresh");
  return out;
}

// Sorts of the block variables must not be used anywhere outside it.
void require_private_sorts(const Formula& phi, const Path& path) {
  const Formula& simple = subformula_at(phi, path);
  std::set<std::string> vsorts;
  for (const auto& v : simple.bound()) vsorts.insert(v.sort);
  for (const auto& v : free_vars(simple))
    if (vsorts.count(v.sort)) throw PreconditionError("sort '" + v.sort + "' is shared by bound and free variables");
  std::function<void(const Formula&, const Path&)> rec = [&](const Formula& g, const Path& p) {
    if (p == path) return;
    if (g.is_atom())
      for (const auto& v : g.args())
        if (vsorts.count(v.sort))
          throw PreconditionError("sort '" + v.sort + "' of the block is used outside the simple subformula");
    for (std::size_t i = 0; i < g.child_count(); ++i) {
      Path q = p;
      q.push_back(i);
      rec(g.child_at(i), q);
    }
  };
  rec(phi, {});
}

std::optional<AccordionResult> try_replacement_case(const Formula& psi, const Formula& phi, const Structure& a) {
  auto diff = difference(phi, psi);
  if (!diff) return std::nullopt;
  const Formula& simple = subformula_at(phi, *diff);
  if (!is_simple(simple)) return std::nullopt;
  auto pairs = match_pairs(subformula_at(psi, *diff), simple, phi, psi);
  if (!pairs) return std::nullopt;
  if (pairs->empty()) throw PreconditionError("the simple subformula needs at least two free variables");
  require_private_sorts(phi, *diff);

  AccordionResult r{Structure(infer_signature(phi)), AccordionCase::Disjunction, *diff};
  const bool dual = simple.quantifier() == Quantifier::Forall;
  r.which = dual ? AccordionCase::Conjunction : AccordionCase::Disjunction;

  Structure& out = r.structure;
  for (const auto& [sort, elems] : a.universes())
    if (out.signature().has_sort(sort)) out.set_universe(sort, elems);
  for (const auto& [name, arity] : out.signature().relations())
    if (a.signature().has_relation(name)) out.set_relation(name, a.relation(name));

  Structure source = a;
  if (dual) {
    for (const auto& p : *pairs) {
      std::set<Tuple> comp;
      const std::set<Tuple> full = a.full_relation(p.symbol);
      std::set_difference(full.begin(), full.end(), a.relation(p.symbol).begin(), a.relation(p.symbol).end(),
                          std::inserter(comp, comp.end()));
      source.set_relation(p.symbol, std::move(comp));
    }
  }
  build_disjunction_case(simple, *pairs, source, out);
  if (dual) {
    for (const auto& atom : members_of(simple)) {
      std::set<Tuple> comp;
      const std::set<Tuple> full = out.full_relation(atom.relation());
      const std::set<Tuple>& cur = out.relation(atom.relation());
      std::set_difference(full.begin(), full.end(), cur.begin(), cur.end(), std::inserter(comp, comp.end()));
      out.set_relation(atom.relation(), std::move(comp));
    }
  }
  return r;
}

std::optional<AccordionResult> try_based_case(const Formula& psi, const Formula& phi, const Structure& a) {
  if (!is_simple(psi) || !is_sentence(psi)) return std::nullopt;
  const std::vector<Formula> psi_atoms = members_of(psi);
  std::set<std::string> psi_bound;
  for (const auto& v : psi.bound()) psi_bound.insert(v.name);
  for (const auto& cand : simple_subformulas(phi)) {
    const Formula& simple = subformula_at(phi, cand.path);
    if (simple.quantifier() != psi.quantifier()) continue;
    std::set<std::string> bound;
    for (const auto& v : simple.bound()) bound.insert(v.name);
    if (bound != psi_bound) continue;
    const std::vector<Formula> atoms = members_of(simple);
    if (atoms.size() != psi_atoms.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < atoms.size() && match; ++i) {
      std::set<std::string> kept, got;
      for (const auto& v : atoms[i].args())
        if (bound.count(v.name)) kept.insert(v.name);
      for (const auto& v : psi_atoms[i].args()) got.insert(v.name);
      match = kept == got;
    }
    if (!match) continue;

    // Every atom of the simple subformula becomes a cylinder over its based atom.
    Structure base(infer_signature(simple));
    for (const auto& [sort, elems] : a.universes())
      if (base.signature().has_sort(sort)) base.set_universe(sort, elems);
    for (const auto& sort : base.signature().sorts())
      if (base.universe(sort).empty()) base.set_universe(sort, {kFillerElement});
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Formula& at = atoms[i];
      const Formula& based = psi_atoms[i];
      std::vector<std::size_t> pick;
      for (const auto& v : based.args()) {
        auto it = std::find_if(at.args().begin(), at.args().end(), [&](const Variable& w) { return w.name == v.name; });
        pick.push_back(static_cast<std::size_t>(it - at.args().begin()));
      }
      const std::set<Tuple>& rel = a.relation(based.relation());
      base.set_relation(at.relation(), relation_where(base, sort_word(at), [&](const Tuple& t) {
                          Tuple proj;
                          for (std::size_t p : pick) proj.push_back(t[p]);
                          return rel.count(proj) != 0;
                        }));
    }
    AccordionResult r{fill_context(phi, cand.path, base, true), AccordionCase::Based, cand.path};
    return r;
  }
  return std::nullopt;
}

void collect_simple(const Formula& f, Path& path, std::vector<SimpleSubformula>& out) {
  if (is_simple(f)) {
    out.push_back({path, f.quantifier(), {f.bound().begin(), f.bound().end()}, free_vars(f)});
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    path.push_back(i);
    collect_simple(f.child_at(i), path, out);
    path.pop_back();
  }
}

}  // namespace

bool is_simple(const Formula& f) {
  return f.kind() == K::Quant && all_atoms(members_of(f));
}

std::vector<SimpleSubformula> simple_subformulas(const Formula& f) {
  std::vector<SimpleSubformula> out;
  Path path;
  collect_simple(f, path, out);
  return out;
}

Structure fill_trivial_relations(const Formula& phi, const Path& path, const Structure& base) {
  return fill_context(phi, path, base, false);
}

std::pair<Formula, Structure> complement_structure(const Formula& phi, const Structure& s) {
  if (!is_symbol_loose(phi)) throw PreconditionError("a relation symbol occurs twice in " + print_formula(phi));
  Structure out = s;
  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case K::Atom:
        return g;
      case K::Not: {
        if (!g.child().is_atom()) throw PreconditionError("negation above a non-atom in " + print_formula(phi));
        const std::string& name = g.child().relation();
        std::set<Tuple> comp;
        const std::set<Tuple> full = s.full_relation(name);
        std::set_difference(full.begin(), full.end(), s.relation(name).begin(), s.relation(name).end(),
                            std::inserter(comp, comp.end()));
        out.set_relation(name, std::move(comp));
        return g.child();
      }
      case K::And:
      case K::Or: {
        Formula l = rec(g.left());
        Formula r = rec(g.right());
        return Formula::binary(g.kind(), l, r);
      }
      case K::Quant:
        return Formula::quantified(g.quantifier(), {g.bound().begin(), g.bound().end()}, rec(g.child()));
    }
    return g;
  };
  Formula psi = rec(phi);
  return {psi, out};
}

Formula full_sort(const Formula& psi) {
  if (!is_symbol_loose(psi)) throw PreconditionError("full_sort requires a symbol-loose formula");
  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    auto resort = [](const Variable& v) { return Variable{v.name, v.name}; };
    switch (g.kind()) {
      case K::Atom: {
        std::vector<Variable> args;
        std::set<std::string> seen;
        for (const auto& v : g.args()) {
          if (!seen.insert(v.name).second)
            throw PreconditionError("atom " + print_formula(g) + " repeats a variable; full sort is undefined");
          args.push_back(resort(v));
        }
        return Formula::atom(g.relation(), std::move(args));
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
  return rec(psi);
}

Structure collapse_sorts(const Formula& psi, const Structure& s) {
  const Formula full = full_sort(psi);
  const Signature target = infer_signature(psi);
  if (target.sorts().size() > 1) throw PreconditionError("collapse_sorts expects a one-sorted formula");
  const std::string one = target.sorts().empty() ? std::string(kDefaultSort) : *target.sorts().begin();

  const std::vector<Element>* widest = nullptr;
  const Signature full_sig = infer_signature(full);
  for (const auto& sort : full_sig.sorts()) {
    const auto& u = s.universe(sort);
    if (u.empty()) throw PreconditionError("sort '" + sort + "' has an empty universe");
    if (!widest || u.size() > widest->size()) widest = &u;
  }
  Structure out(target);
  out.set_universe(one, widest ? *widest : std::vector<Element>{kFillerElement});
  const std::vector<Element>& bprime = out.universe(one);

  // f_s sends the i-th element of B' to element i mod |B_s| of B_s.
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (!g.is_atom()) {
      for (std::size_t i = 0; i < g.child_count(); ++i) rec(g.child_at(i));
      return;
    }
    const SortWord arity = sort_word(full_sort(g));
    std::vector<std::map<Element, std::vector<Element>>> preimage(arity.size());
    for (std::size_t p = 0; p < arity.size(); ++p) {
      const auto& bs = s.universe(arity[p]);
      for (std::size_t i = 0; i < bprime.size(); ++i) preimage[p][bs[i % bs.size()]].push_back(bprime[i]);
    }
    std::set<Tuple> rel;
    for (const auto& t : s.relation(g.relation())) {
      std::vector<const std::vector<Element>*> domains;
      for (std::size_t p = 0; p < t.size(); ++p) domains.push_back(&preimage[p][t[p]]);
      for_each_tuple(domains, [&](const Tuple& x) { rel.insert(x); });
    }
    out.set_relation(g.relation(), std::move(rel));
  };
  rec(psi);
  return out;
}

Formula make_accordion_pair(const Formula& phi, const Path& path) {
  const Formula& simple = subformula_at(phi, path);
  if (!is_simple(simple)) throw PreconditionError("no simple subformula at " + path_to_string(path));
  const auto pairs = all_pairs(free_vars(simple));
  if (pairs.empty()) throw PreconditionError("the simple subformula needs at least two free variables");
  const std::set<std::string> used = symbols_of(phi);
  std::vector<Formula> atoms;
  std::size_t n = 0;
  for (const auto& [x, y] : pairs) {
    std::string name;
    do name = kFreshPrefix + std::to_string(++n);
    while (used.count(name));
    atoms.push_back(Formula::atom(name, {x, y}));
  }
  const K conn = simple.quantifier() == Quantifier::Exists ? K::Or : K::And;
  return replace_at(phi, path, combine(conn, atoms));
}

Formula based_sentence(const Formula& phi, const Path& path) {
  const Formula& simple = subformula_at(phi, path);
  if (!is_simple(simple)) throw PreconditionError("no simple subformula at " + path_to_string(path));
  const std::vector<Variable> bound(simple.bound().begin(), simple.bound().end());
  std::vector<Formula> atoms;
  for (const auto& at : members_of(simple)) {
    std::vector<Variable> kept;
    for (const auto& v : at.args())
      if (std::find(bound.begin(), bound.end(), v) != bound.end() &&
          std::find(kept.begin(), kept.end(), v) == kept.end())
        kept.push_back(v);
    if (kept.empty()) throw PreconditionError("atom " + print_formula(at) + " has no quantified variable");
    atoms.push_back(Formula::atom(std::string(kFreshPrefix) + "base_" + at.relation(), std::move(kept)));
  }
  return Formula::quantified(simple.quantifier(), bound, combine(connective_of(simple.quantifier()), atoms));
}

AccordionResult accordion_step(const Formula& psi, const Formula& phi, const Structure& a) {
  if (!is_sentence(psi) || !is_sentence(phi)) throw PreconditionError("accordion_step expects two sentences");
  if (!is_symbol_loose(phi)) throw PreconditionError("phi must be symbol-loose");
  check_against(psi, a.signature());
  std::optional<AccordionResult> r = try_replacement_case(psi, phi, a);
  if (!r) r = try_based_case(psi, phi, a);
  if (!r) throw PreconditionError("(psi, phi) matches none of the accordion cases");

  const Formula& simple = subformula_at(phi, r->path);
  r->measure_in = a.max_universe_size();
  r->measure_out = r->structure.max_universe_size();
  const std::size_t vars = all_vars(phi).size();
  r->measure_bound = vars * vars * std::max<std::size_t>(1, free_vars(simple).size()) * std::max<std::size_t>(1, r->measure_in);
  if (r->measure_out > r->measure_bound) throw Error("internal: accordion measure bound violated");
  r->structure.validate();
  return *r;
}

std::optional<CliqueWitness> find_existential_clique(const Formula& theta, std::size_t k) {
  std::optional<CliqueWitness> found;
  // Scope: innermost binder of each variable and whether it is existential.
  std::function<void(const Formula&, Path&, std::map<Variable, bool>&)> walk =
      [&](const Formula& f, Path& path, std::map<Variable, bool>& scope) {
        if (found || f.kind() == K::Not || f.is_atom()) return;
        if (f.kind() == K::Quant) {
          std::map<Variable, bool> inner = scope;
          for (const auto& v : f.bound()) inner[v] = f.quantifier() == Quantifier::Exists;
          if (f.quantifier() == Quantifier::Exists && is_simple(f)) {
            const std::vector<Formula> atoms = members_of(f);
            std::vector<Variable> cand;
            for (const auto& v : free_vars(f.child()))
              if (auto it = inner.find(v); it != inner.end() && it->second) cand.push_back(v);
            const std::size_t n = cand.size();
            std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
            for (const auto& at : atoms) {
              VarSet fv = free_vars(at);
              for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                  if (i != j && fv.count(cand[i]) && fv.count(cand[j])) adj[i][j] = true;
            }
            std::vector<std::size_t> best, cur;
            std::function<void(std::size_t)> grow = [&](std::size_t next) {
              if (cur.size() > best.size()) best = cur;
              for (std::size_t i = next; i < n; ++i) {
                if (cur.size() + (n - i) <= best.size()) return;
                bool ok = std::all_of(cur.begin(), cur.end(), [&](std::size_t c) { return adj[c][i]; });
                if (!ok) continue;
                cur.push_back(i);
                grow(i + 1);
                cur.pop_back();
              }
            };
            grow(0);
            if (best.size() >= k && k > 0) {
              CliqueWitness w;
              w.path = path;
              for (std::size_t i : best) w.vars.push_back(cand[i]);
              w.chosen.assign(w.vars.begin(), w.vars.begin() + static_cast<std::ptrdiff_t>(k));
              for (std::size_t i = 0; i < atoms.size(); ++i) {
                VarSet fv = free_vars(atoms[i]);
                std::size_t hits = 0;
                for (const auto& v : w.chosen) hits += fv.count(v);
                if (hits >= 2) w.atoms.push_back(i);
              }
              found = std::move(w);
              return;
            }
          }
          path.push_back(0);
          walk(f.child(), path, inner);
          path.pop_back();
          return;
        }
        for (std::size_t i = 0; i < f.child_count(); ++i) {
          path.push_back(i);
          walk(f.child_at(i), path, scope);
          path.pop_back();
        }
      };
  Path path;
  std::map<Variable, bool> scope;
  walk(theta, path, scope);
  return found;
}

Structure clique_gadget(std::size_t k, const Formula& theta, const Graph& g) {
  if (!is_symbol_loose(theta)) throw PreconditionError("clique_gadget requires a symbol-loose formula");
  if (g.vertices.empty()) throw PreconditionError("the graph needs at least one vertex");
  auto w = find_existential_clique(theta, k);
  if (!w) throw PreconditionError("formula has no existential " + std::to_string(k) + "-clique");

  const Signature sig = infer_signature(theta);
  Structure base(sig);
  for (const auto& sort : sig.sorts()) base.set_universe(sort, g.vertices);
  std::set<std::pair<Element, Element>> edges;
  for (const auto& [u, v] : g.edges) {
    edges.insert({u, v});
    edges.insert({v, u});
  }
  const Formula& simple = subformula_at(theta, w->path);
  const std::vector<Formula> atoms = members_of(simple);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Formula& at = atoms[i];
    if (std::find(w->atoms.begin(), w->atoms.end(), i) == w->atoms.end()) {
      base.set_relation(at.relation(), base.full_relation(at.relation()));
      continue;
    }
    std::vector<std::size_t> wpos;
    for (std::size_t p = 0; p < at.args().size(); ++p)
      if (std::find(w->chosen.begin(), w->chosen.end(), at.args()[p]) != w->chosen.end()) wpos.push_back(p);
    base.set_relation(at.relation(), relation_where(base, sort_word(at), [&](const Tuple& t) {
                        for (std::size_t x : wpos)
                          for (std::size_t y : wpos)
                            if (at.args()[x] != at.args()[y] && !edges.count({t[x], t[y]})) return false;
                        return true;
                      }));
  }
  return fill_context(theta, w->path, base, true);
}

bool has_clique(const Graph& g, std::size_t k) {
  if (k == 0) return true;
  const std::size_t n = g.vertices.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[g.vertices[i]] = i;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : g.edges) adj[idx.at(u)][idx.at(v)] = adj[idx.at(v)][idx.at(u)] = true;
  std::vector<std::size_t> cur;
  std::function<bool(std::size_t)> grow = [&](std::size_t next) {
    if (cur.size() == k) return true;
    for (std::size_t i = next; i < n; ++i) {
      if (!std::all_of(cur.begin(), cur.end(), [&](std::size_t c) { return adj[c][i]; })) continue;
      cur.push_back(i);
      if (grow(i + 1)) return true;
      cur.pop_back();
    }
    return false;
  };
  return grow(0);
}

}  // namespace folio
