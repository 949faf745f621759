#include "folio/normalize.hpp"

#include <algorithm>

#include "folio/hypergraph.hpp"

namespace folio {

using K = Formula::Kind;

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Alpha: return "alpha";
    case Rule::Beta: return "beta";
    case Rule::Gamma: return "gamma";
    case Rule::Delta: return "delta";
    case Rule::Epsilon: return "epsilon";
    case Rule::Replacement: return "replacement";
  }
  return "?";
}

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::Forward: return "forward";
    case Direction::Backward: return "backward";
    case Direction::Commute: return "commute";
  }
  return "?";
}

nlohmann::json to_json(const RewriteStep& step) {
  nlohmann::json j;
  j["rule"] = rule_name(step.rule);
  j["path"] = step.path;
  j["direction"] = direction_name(step.direction);
  if (step.rule == Rule::Replacement) j["symbol"] = step.symbol;
  return j;
}

namespace {

K connective_of(Quantifier q) { return q == Quantifier::Exists ? K::And : K::Or; }
K spread_of(Quantifier q) { return q == Quantifier::Exists ? K::Or : K::And; }
K other(K k) { return k == K::And ? K::Or : K::And; }

bool disjoint_from(std::span<const Variable> vars, const VarSet& fv) {
  for (const auto& v : vars)
    if (fv.count(v)) return false;
  return true;
}

Formula requant(const Formula& q, Formula body) {
  return Formula::quantified(q.quantifier(), {q.bound().begin(), q.bound().end()}, std::move(body));
}

Formula requant(Quantifier q, std::span<const Variable> vars, Formula body) {
  return Formula::quantified(q, {vars.begin(), vars.end()}, std::move(body));
}

[[noreturn]] void mismatch(const RewriteStep& step, const std::string& why) {
  throw PreconditionError(rule_name(step.rule) + " (" + direction_name(step.direction) + ") does not apply at " +
                          path_to_string(step.path) + ": " + why);
}

Formula rewrite_node(const Formula& n, const RewriteStep& step, const Signature* sig) {
  const bool fwd = step.direction == Direction::Forward;
  if (step.direction == Direction::Commute && step.rule != Rule::Alpha) mismatch(step, "only alpha commutes");
  switch (step.rule) {
    case Rule::Alpha: {
      if (!n.is_binary()) mismatch(step, "not a conjunction or disjunction");
      if (step.direction == Direction::Commute) return Formula::binary(n.kind(), n.right(), n.left());
      if (fwd) {
        if (n.left().kind() != n.kind()) mismatch(step, "left operand has a different connective");
        return Formula::binary(n.kind(), n.left().left(), Formula::binary(n.kind(), n.left().right(), n.right()));
      }
      if (n.right().kind() != n.kind()) mismatch(step, "right operand has a different connective");
      return Formula::binary(n.kind(), Formula::binary(n.kind(), n.left(), n.right().left()), n.right().right());
    }
    case Rule::Beta: {
      if (fwd) {
        if (n.kind() != K::Quant || n.child().kind() != spread_of(n.quantifier())) mismatch(step, "no quantified spread");
        const Formula& b = n.child();
        return Formula::binary(b.kind(), requant(n, b.left()), requant(n, b.right()));
      }
      if (!n.is_binary() || n.left().kind() != K::Quant || n.right().kind() != K::Quant)
        mismatch(step, "operands are not both quantified");
      const Formula& l = n.left();
      const Formula& r = n.right();
      if (l.quantifier() != r.quantifier() || spread_of(l.quantifier()) != n.kind() ||
          !std::equal(l.bound().begin(), l.bound().end(), r.bound().begin(), r.bound().end()))
        mismatch(step, "operands do not share the quantifier block");
      return requant(l, Formula::binary(n.kind(), l.child(), r.child()));
    }
    case Rule::Gamma: {
      if (fwd) {
        if (n.kind() != K::Quant) mismatch(step, "not a quantifier");
        const Formula& b = n.child();
        if (b.kind() == connective_of(n.quantifier())) {
          if (disjoint_from(n.bound(), free_vars(b.right())))
            return Formula::binary(b.kind(), requant(n, b.left()), b.right());
          if (disjoint_from(n.bound(), free_vars(b.left())))
            return Formula::binary(b.kind(), b.left(), requant(n, b.right()));
        }
        if (disjoint_from(n.bound(), free_vars(b))) return b;
        mismatch(step, "quantified variables occur in every operand");
      }
      if (!n.is_binary()) mismatch(step, "not a conjunction or disjunction");
      if (n.left().kind() == K::Quant && connective_of(n.left().quantifier()) == n.kind() &&
          disjoint_from(n.left().bound(), free_vars(n.right())))
        return requant(n.left(), Formula::binary(n.kind(), n.left().child(), n.right()));
      if (n.right().kind() == K::Quant && connective_of(n.right().quantifier()) == n.kind() &&
          disjoint_from(n.right().bound(), free_vars(n.left())))
        return requant(n.right(), Formula::binary(n.kind(), n.left(), n.right().child()));
      mismatch(step, "no quantified operand can absorb the other");
    }
    case Rule::Delta: {
      if (!n.is_binary()) mismatch(step, "not a conjunction or disjunction");
      const K k = n.kind();
      const K o = other(k);
      if (fwd) {
        if (n.right().kind() == o)
          return Formula::binary(o, Formula::binary(k, n.left(), n.right().left()),
                                 Formula::binary(k, n.left(), n.right().right()));
        if (n.left().kind() == o)
          return Formula::binary(o, Formula::binary(k, n.left().left(), n.right()),
                                 Formula::binary(k, n.left().right(), n.right()));
        mismatch(step, "no operand to distribute over");
      }
      // (A k B) o (A k C)  ->  A k (B o C)
      if (n.left().kind() == o && n.right().kind() == o && n.left().left() == n.right().left())
        return Formula::binary(o, n.left().left(), Formula::binary(k, n.left().right(), n.right().right()));
      mismatch(step, "operands do not share a left factor");
    }
    case Rule::Epsilon: {
      if (fwd) {
        if (n.kind() != K::Not) mismatch(step, "not a negation");
        const Formula& c = n.child();
        if (c.kind() == K::Quant) return requant(dual(c.quantifier()), c.bound(), Formula::negation(c.child()));
        if (c.is_binary()) return Formula::binary(other(c.kind()), Formula::negation(c.left()), Formula::negation(c.right()));
        mismatch(step, "negation of an atom or negation");
      }
      if (n.kind() == K::Quant && n.child().kind() == K::Not)
        return Formula::negation(requant(dual(n.quantifier()), n.bound(), n.child().child()));
      if (n.is_binary() && n.left().kind() == K::Not && n.right().kind() == K::Not)
        return Formula::negation(Formula::binary(other(n.kind()), n.left().child(), n.right().child()));
      mismatch(step, "no negated operands");
    }
    case Rule::Replacement: {
      if (!n.is_atom()) mismatch(step, "not an atom");
      if (step.symbol.empty()) mismatch(step, "no replacement symbol");
      if (sig) {
        SortWord word;
        for (const auto& v : n.args()) word.push_back(v.sort);
        if (sig->arity(step.symbol) != word) throw SignatureError("replacement symbol '" + step.symbol + "' has a different arity");
      }
      return Formula::atom(step.symbol, {n.args().begin(), n.args().end()});
    }
  }
  mismatch(step, "unknown rule");
}

// Top down over the formula as it is being rewritten, so every recorded
// epsilon step applies at its path when replayed in order. Double negations
// are dropped silently.
Formula nnf_rec(const Formula& f, Path& path, std::vector<RewriteStep>* trace) {
  Formula g = f;
  while (g.kind() == K::Not && g.child().kind() != K::Atom) {
    const Formula& c = g.child();
    if (c.kind() == K::Not) {
      g = c.child();
      continue;
    }
    if (trace) trace->push_back({Rule::Epsilon, path, Direction::Forward, {}});
    g = c.kind() == K::Quant ? requant(dual(c.quantifier()), c.bound(), Formula::negation(c.child()))
                             : Formula::binary(other(c.kind()), Formula::negation(c.left()), Formula::negation(c.right()));
  }
  switch (g.kind()) {
    case K::Atom:
    case K::Not:
      return g;
    case K::And:
    case K::Or: {
      path.push_back(0);
      Formula l = nnf_rec(g.left(), path, trace);
      path.back() = 1;
      Formula r = nnf_rec(g.right(), path, trace);
      path.pop_back();
      return Formula::binary(g.kind(), l, r);
    }
    case K::Quant: {
      path.push_back(0);
      Formula body = nnf_rec(g.child(), path, trace);
      path.pop_back();
      return requant(g, body);
    }
  }
  return g;
}

// ------------------------------------------------------------- organization

using Clause = std::vector<Formula>;
using Clauses = std::vector<Clause>;

constexpr std::size_t kMaxClauses = 200000;

struct NormalForms {
  Clauses cnf;  // conjunction of disjunctions
  Clauses dnf;  // disjunction of conjunctions
};

// Idempotence: drops repeated members of a clause and repeated clauses.
Clause unique_members(Clause c) {
  Clause out;
  for (auto& m : c)
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
  return out;
}

Clauses unique_clauses(Clauses in) {
  Clauses out;
  std::set<std::vector<std::string>> seen;
  for (auto& c : in) {
    c = unique_members(std::move(c));
    std::vector<std::string> key;
    for (const auto& m : c) key.push_back(print_formula(m));
    std::sort(key.begin(), key.end());
    if (seen.insert(std::move(key)).second) out.push_back(std::move(c));
  }
  return out;
}

// Distributes a list of clauses into the dual normal form.
Clauses distribute(const Clauses& in) {
  Clauses out{{}};
  for (const auto& clause : in) {
    Clauses next;
    for (const auto& partial : out) {
      for (const auto& lit : clause) {
        Clause c = partial;
        c.push_back(lit);
        next.push_back(std::move(c));
        if (next.size() > kMaxClauses) throw LimitError("normal form exceeds " + std::to_string(kMaxClauses) + " clauses");
      }
    }
    out = unique_clauses(std::move(next));
  }
  return out;
}

Clauses product(const Clauses& a, const Clauses& b) {
  Clauses out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Clause c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
      if (out.size() > kMaxClauses) throw LimitError("normal form exceeds " + std::to_string(kMaxClauses) + " clauses");
    }
  }
  return unique_clauses(std::move(out));
}

class Organizer {
 public:
  explicit Organizer(std::vector<RewriteStep>* trace) : trace_(trace) {}

  NormalForms run(const Formula& f, Path& path) {
    switch (f.kind()) {
      case K::Atom:
      case K::Not:
        return {{{f}}, {{f}}};
      case K::And:
      case K::Or: {
        path.push_back(0);
        NormalForms l = run(f.left(), path);
        path.back() = 1;
        NormalForms r = run(f.right(), path);
        path.pop_back();
        NormalForms out;
        Clauses& same = f.kind() == K::And ? out.cnf : out.dnf;
        Clauses& cross = f.kind() == K::And ? out.dnf : out.cnf;
        const Clauses& ls = f.kind() == K::And ? l.cnf : l.dnf;
        const Clauses& rs = f.kind() == K::And ? r.cnf : r.dnf;
        same = ls;
        same.insert(same.end(), rs.begin(), rs.end());
        same = unique_clauses(std::move(same));
        const Clauses& lc = f.kind() == K::And ? l.dnf : l.cnf;
        const Clauses& rc = f.kind() == K::And ? r.dnf : r.cnf;
        cross = product(lc, rc);
        if (lc.size() > 1 || rc.size() > 1) record(Rule::Delta, path);
        return out;
      }
      case K::Quant: {
        // Blocks were expanded beforehand, so exactly one variable is bound.
        const Variable& v = f.bound()[0];
        const Quantifier q = f.quantifier();
        path.push_back(0);
        NormalForms inner = run(f.child(), path);
        path.pop_back();
        const Clauses& spread = q == Quantifier::Exists ? inner.dnf : inner.cnf;
        if (spread.size() > 1) record(Rule::Beta, path);
        Clauses pushed;
        for (const auto& clause : spread) pushed.push_back(push_into(q, v, clause, path));
        pushed = unique_clauses(std::move(pushed));
        NormalForms out;
        if (q == Quantifier::Exists) {
          out.dnf = std::move(pushed);
          out.cnf = distribute(out.dnf);
        } else {
          out.cnf = std::move(pushed);
          out.dnf = distribute(out.cnf);
        }
        if (out.cnf.size() > 1 || out.dnf.size() > 1) record(Rule::Delta, path);
        return out;
      }
    }
    return {};
  }

 private:
  // Q v applied to one clause: members mentioning v are grouped under the
  // quantifier, placed where the first of them stood.
  Clause push_into(Quantifier q, const Variable& v, const Clause& clause, const Path& path) {
    Clause with, out;
    std::size_t first = clause.size();
    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (free_vars(clause[i]).count(v)) {
        if (with.empty()) first = i;
        with.push_back(clause[i]);
      }
    }
    if (with.size() != clause.size()) record(Rule::Gamma, path);
    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (i == first) out.push_back(Formula::quantified(q, {v}, combine(connective_of(q), with)));
      if (!free_vars(clause[i]).count(v)) out.push_back(clause[i]);
    }
    return out;
  }

  void record(Rule r, const Path& path) {
    if (trace_) trace_->push_back({r, path, Direction::Forward, {}});
  }

  std::vector<RewriteStep>* trace_;
};

std::string base_name(const std::string& name) { return name.substr(0, name.find('$')); }

class Loosener {
 public:
  explicit Loosener(std::set<std::string> taken) : taken_(std::move(taken)) {}

  Formula run(const Formula& f, std::map<Variable, Variable>& env, std::set<std::string>& used) {
    switch (f.kind()) {
      case K::Atom: {
        std::vector<Variable> args(f.args().begin(), f.args().end());
        for (auto& a : args) {
          auto it = env.find(a);
          if (it != env.end()) a = it->second;
        }
        return Formula::atom(f.relation(), std::move(args));
      }
      case K::Not:
        return Formula::negation(run(f.child(), env, used));
      case K::And:
      case K::Or: {
        Formula l = run(f.left(), env, used);
        Formula r = run(f.right(), env, used);
        return Formula::binary(f.kind(), l, r);
      }
      case K::Quant: {
        std::map<Variable, Variable> inner = env;
        std::vector<Variable> vars;
        for (const auto& v : f.bound()) {
          Variable nv = v;
          if (used.count(v.name)) nv.name = fresh(v.name);
          used.insert(nv.name);
          taken_.insert(nv.name);
          inner[v] = nv;
          vars.push_back(nv);
        }
        return Formula::quantified(f.quantifier(), std::move(vars), run(f.child(), inner, used));
      }
    }
    return f;
  }

 private:
  std::string fresh(const std::string& name) {
    const std::string base = base_name(name);
    for (std::size_t k = 1;; ++k) {
      std::string candidate = base + "$" + std::to_string(k);
      if (!taken_.count(candidate)) return candidate;
    }
  }

  std::set<std::string> taken_;
};

Formula layer_rec(const Formula& f) {
  if (f.is_literal()) return f;
  const Quantifier q = f.quantifier();
  const K conn = connective_of(q);
  std::vector<Variable> vars(f.bound().begin(), f.bound().end());
  std::vector<Formula> members;
  for (const auto& kid : flatten(f.child(), conn)) {
    Formula lk = layer_rec(kid);
    if (lk.kind() == K::Quant && lk.quantifier() == q) {
      vars.insert(vars.end(), lk.bound().begin(), lk.bound().end());
      for (auto& m : flatten(lk.child(), conn)) members.push_back(std::move(m));
    } else {
      members.push_back(std::move(lk));
    }
  }
  std::vector<std::pair<std::string, Formula>> keyed;
  for (auto& m : members) keyed.emplace_back(print_formula(m), std::move(m));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  members.clear();
  for (auto& [key, m] : keyed) members.push_back(std::move(m));
  return Formula::quantified(q, std::move(vars), combine(conn, members));
}

}  // namespace

Formula apply_transformation(const Formula& f, const RewriteStep& step, const Signature* sig) {
  const Formula& node = subformula_at(f, step.path);
  return replace_at(f, step.path, rewrite_node(node, step, sig));
}

Formula nnf(const Formula& f, std::vector<RewriteStep>* trace) {
  Path path;
  return nnf_rec(f, path, trace);
}

Formula dual(const Formula& f) {
  switch (f.kind()) {
    case K::Atom:
      return f;
    case K::Not:
      return Formula::negation(dual(f.child()));
    case K::And:
    case K::Or:
      return Formula::binary(other(f.kind()), dual(f.left()), dual(f.right()));
    case K::Quant:
      return requant(folio::dual(f.quantifier()), f.bound(), dual(f.child()));
  }
  return f;
}

bool is_organized(const Formula& f) {
  if (f.is_literal()) return true;
  if (f.kind() != K::Quant || f.bound().size() != 1) return false;
  const Variable& v = f.bound()[0];
  for (const auto& kid : flatten(f.child(), connective_of(f.quantifier()))) {
    if (!free_vars(kid).count(v) || !is_organized(kid)) return false;
  }
  return true;
}

Formula organize(const Formula& f, std::vector<RewriteStep>* trace) {
  Formula prepared = expand_blocks(nnf(f, trace));
  Path path;
  NormalForms forms = Organizer(trace).run(prepared, path);
  std::vector<Formula> disjuncts;
  for (const auto& clause : forms.dnf) disjuncts.push_back(conjoin(clause));
  return disjoin(disjuncts);
}

bool is_layered(const Formula& f, Quantifier q) {
  if (f.is_literal()) return true;
  if (f.kind() != K::Quant || f.quantifier() != q) return false;
  std::vector<VertexSet> edges;
  VertexSet covered;
  for (const auto& kid : flatten(f.child(), connective_of(q))) {
    if (!is_layered(kid, dual(q))) return false;
    VertexSet e;
    for (const auto& v : free_vars(kid)) e.insert(v.name);
    covered.insert(e.begin(), e.end());
    edges.push_back(std::move(e));
  }
  VertexSet block;
  for (const auto& v : f.bound()) {
    if (!covered.count(v.name)) return false;
    block.insert(v.name);
  }
  return s_connected(edges, block);
}

bool is_layered(const Formula& f) {
  if (!is_variable_loose(f)) return false;
  return is_layered(f, Quantifier::Exists) || is_layered(f, Quantifier::Forall);
}

Formula make_variable_loose(const Formula& f, const std::set<std::string>& reserved) {
  std::set<std::string> taken = reserved;
  for (const auto& v : all_vars(f)) taken.insert(v.name);
  std::set<std::string> used;
  for (const auto& v : free_vars(f)) used.insert(v.name);
  std::map<Variable, Variable> env;
  return Loosener(std::move(taken)).run(f, env, used);
}

Formula layer(const Formula& f) {
  if (!is_organized(f)) throw PreconditionError("layer() requires an organized formula: " + print_formula(f));
  return layer_rec(make_variable_loose(f));
}

namespace {

Formula lay_rec(const Formula& f, const std::set<std::string>& reserved) {
  if (f.is_binary()) return Formula::binary(f.kind(), lay_rec(f.left(), reserved), lay_rec(f.right(), reserved));
  return layer_rec(make_variable_loose(f, reserved));
}

}  // namespace

Formula lay(const Formula& f) {
  std::set<std::string> reserved;
  for (const auto& v : all_vars(f)) reserved.insert(v.name);
  return lay_rec(organize(f), reserved);
}

Formula replace_symbols(const Formula& f, const std::map<std::size_t, std::string>& substitution,
                        const Signature& target) {
  std::size_t counter = 0;
  auto rec = [&](auto&& self, const Formula& g) -> Formula {
    switch (g.kind()) {
      case K::Atom: {
        std::size_t idx = counter++;
        auto it = substitution.find(idx);
        if (it == substitution.end()) return g;
        SortWord word;
        for (const auto& v : g.args()) word.push_back(v.sort);
        if (target.arity(it->second) != word)
          throw SignatureError("symbol '" + it->second + "' cannot replace '" + g.relation() + "': arity differs");
        return Formula::atom(it->second, {g.args().begin(), g.args().end()});
      }
      case K::Not:
        return Formula::negation(self(self, g.child()));
      case K::And:
      case K::Or: {
        Formula l = self(self, g.left());
        Formula r = self(self, g.right());
        return Formula::binary(g.kind(), l, r);
      }
      case K::Quant:
        return requant(g, self(self, g.child()));
    }
    return g;
  };
  Formula out = rec(rec, f);
  for (const auto& [idx, sym] : substitution)
    if (idx >= counter) throw PreconditionError("atom occurrence " + std::to_string(idx) + " does not exist");
  return out;
}

std::vector<Formula> enumerate_replacements(const Formula& f, const Signature& target) {
  std::vector<std::vector<std::string>> choices;
  auto collect = [&](auto&& self, const Formula& g) -> void {
    if (g.is_atom()) {
      SortWord word;
      for (const auto& v : g.args()) word.push_back(v.sort);
      std::vector<std::string> options;
      for (const auto& [name, arity] : target.relations())
        if (arity == word) options.push_back(name);
      choices.push_back(std::move(options));
      return;
    }
    for (std::size_t i = 0; i < g.child_count(); ++i) self(self, g.child_at(i));
  };
  collect(collect, f);
  std::vector<Formula> out;
  std::map<std::size_t, std::string> pick;
  auto enumerate = [&](auto&& self, std::size_t i) -> void {
    if (i == choices.size()) {
      out.push_back(replace_symbols(f, pick, target));
      return;
    }
    for (const auto& sym : choices[i]) {
      pick[i] = sym;
      self(self, i + 1);
    }
  };
  enumerate(enumerate, 0);
  return out;
}

}  // namespace folio
