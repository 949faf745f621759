#include "folio/logic.hpp"

#include <algorithm>
#include <sstream>

#include "indexed_structure.hpp"

namespace folio {

// ---------------------------------------------------------------- Signature

void Signature::add_sort(const std::string& sort) {
  if (sort.empty()) throw SignatureError("empty sort name");
  sorts_.insert(sort);
}

void Signature::add_relation(const std::string& name, SortWord arity) {
  if (name.empty()) throw SignatureError("empty relation name");
  if (arity.empty()) throw SignatureError("relation '" + name + "' must have arity >= 1");
  auto it = relations_.find(name);
  if (it != relations_.end()) {
    if (it->second != arity) throw SignatureError("relation '" + name + "' redeclared with a different arity");
    return;
  }
  for (const auto& s : arity) add_sort(s);
  relations_.emplace(name, std::move(arity));
}

const SortWord& Signature::arity(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw SignatureError("unknown relation symbol '" + name + "'");
  return it->second;
}

// ------------------------------------------------------------------ Formula

Formula Formula::atom(std::string relation, std::vector<Variable> args) {
  if (args.empty()) throw SignatureError("atom '" + relation + "' needs at least one argument");
  return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(relation), std::move(args), {}, {}}));
}

Formula Formula::negation(Formula child) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {}, {std::move(child)}}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(Node{Kind::And, {}, {}, {}, {std::move(left), std::move(right)}}));
}

Formula Formula::disjunction(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, {}, {}, {std::move(left), std::move(right)}}));
}

Formula Formula::binary(Kind kind, Formula left, Formula right) {
  if (kind == Kind::And) return conjunction(std::move(left), std::move(right));
  if (kind == Kind::Or) return disjunction(std::move(left), std::move(right));
  throw PreconditionError("binary() needs And or Or");
}

Formula Formula::quantified(Quantifier q, std::vector<Variable> vars, Formula body) {
  if (vars.empty()) throw PreconditionError("quantifier block must bind at least one variable");
  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v.name).second) throw PreconditionError("variable '" + v.name + "' repeated in quantifier block");
  return Formula(std::make_shared<const Node>(Node{Kind::Quant, {}, std::move(vars), q, {std::move(body)}}));
}

bool Formula::is_literal() const {
  return kind() == Kind::Atom || (kind() == Kind::Not && child().kind() == Kind::Atom);
}

const std::string& Formula::relation() const {
  if (kind() != Kind::Atom) throw PreconditionError("relation() on a non-atom");
  return node_->relation;
}

std::span<const Variable> Formula::args() const {
  if (kind() != Kind::Atom) throw PreconditionError("args() on a non-atom");
  return node_->vars;
}

const Formula& Formula::child() const {
  if (kind() != Kind::Not && kind() != Kind::Quant) throw PreconditionError("child() on a node without a single child");
  return node_->children[0];
}

const Formula& Formula::left() const {
  if (!is_binary()) throw PreconditionError("left() on a non-binary node");
  return node_->children[0];
}

const Formula& Formula::right() const {
  if (!is_binary()) throw PreconditionError("right() on a non-binary node");
  return node_->children[1];
}

Quantifier Formula::quantifier() const {
  if (kind() != Kind::Quant) throw PreconditionError("quantifier() on a non-quantifier");
  return node_->quantifier;
}

std::span<const Variable> Formula::bound() const {
  if (kind() != Kind::Quant) throw PreconditionError("bound() on a non-quantifier");
  return node_->vars;
}

std::size_t Formula::child_count() const { return node_->children.size(); }

const Formula& Formula::child_at(std::size_t i) const {
  if (i >= node_->children.size()) throw PreconditionError("child index out of range");
  return node_->children[i];
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.relation != b.relation || a.vars != b.vars) return false;
  if (a.kind == Kind::Quant && a.quantifier != b.quantifier) return false;
  return a.children == b.children;
}

Formula combine(Formula::Kind kind, std::span<const Formula> parts) {
  if (parts.empty()) throw PreconditionError("cannot combine an empty list of formulas");
  Formula acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::binary(kind, acc, parts[i]);
  return acc;
}

Formula conjoin(std::span<const Formula> parts) { return combine(Formula::Kind::And, parts); }
Formula disjoin(std::span<const Formula> parts) { return combine(Formula::Kind::Or, parts); }

namespace {

void flatten_into(const Formula& f, Formula::Kind kind, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    flatten_into(f.left(), kind, out);
    flatten_into(f.right(), kind, out);
  } else {
    out.push_back(f);
  }
}

void free_vars_into(const Formula& f, VarSet& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out.insert(f.args().begin(), f.args().end());
      return;
    case Formula::Kind::Not:
      free_vars_into(f.child(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      free_vars_into(f.left(), out);
      free_vars_into(f.right(), out);
      return;
    case Formula::Kind::Quant: {
      VarSet inner;
      free_vars_into(f.child(), inner);
      for (const auto& v : f.bound()) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

// Returns free_vars(f) and raises `best` to the largest free set seen below.
VarSet width_walk(const Formula& f, std::size_t& best) {
  VarSet fv;
  switch (f.kind()) {
    case Formula::Kind::Atom:
      fv.insert(f.args().begin(), f.args().end());
      break;
    case Formula::Kind::Not:
      fv = width_walk(f.child(), best);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      fv = width_walk(f.left(), best);
      VarSet r = width_walk(f.right(), best);
      fv.insert(r.begin(), r.end());
      break;
    }
    case Formula::Kind::Quant:
      fv = width_walk(f.child(), best);
      for (const auto& v : f.bound()) fv.erase(v);
      break;
  }
  best = std::max(best, fv.size());
  return fv;
}

template <typename Visit>
void visit_preorder(const Formula& f, Visit&& visit) {
  visit(f);
  for (std::size_t i = 0; i < f.child_count(); ++i) visit_preorder(f.child_at(i), visit);
}

}  // namespace

std::vector<Formula> flatten(const Formula& f, Formula::Kind kind) {
  std::vector<Formula> out;
  flatten_into(f, kind, out);
  return out;
}

Formula expand_blocks(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::Not:
      return Formula::negation(expand_blocks(f.child()));
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return Formula::binary(f.kind(), expand_blocks(f.left()), expand_blocks(f.right()));
    case Formula::Kind::Quant: {
      Formula body = expand_blocks(f.child());
      auto vars = f.bound();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::quantified(f.quantifier(), {*it}, body);
      return body;
    }
  }
  return f;
}

VarSet free_vars(const Formula& f) {
  VarSet out;
  free_vars_into(f, out);
  return out;
}

VarSet all_vars(const Formula& f) {
  VarSet out;
  visit_preorder(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Atom) out.insert(g.args().begin(), g.args().end());
    if (g.kind() == Formula::Kind::Quant) out.insert(g.bound().begin(), g.bound().end());
  });
  return out;
}

std::size_t width(const Formula& f) {
  std::size_t best = 0;
  width_walk(f, best);
  return best;
}

std::size_t node_count(const Formula& f) {
  std::size_t n = 0;
  visit_preorder(f, [&](const Formula&) { ++n; });
  return n;
}

std::size_t atom_count(const Formula& f) {
  std::size_t n = 0;
  visit_preorder(f, [&](const Formula& g) { n += g.is_atom() ? 1 : 0; });
  return n;
}

bool is_variable_loose(const Formula& f) {
  VarSet quantified;
  bool ok = true;
  visit_preorder(f, [&](const Formula& g) {
    if (g.kind() != Formula::Kind::Quant) return;
    for (const auto& v : g.bound())
      if (!quantified.insert(v).second) ok = false;
  });
  if (!ok) return false;
  for (const auto& v : free_vars(f))
    if (quantified.count(v)) return false;
  return true;
}

bool is_symbol_loose(const Formula& f) {
  std::set<std::string> seen;
  bool ok = true;
  visit_preorder(f, [&](const Formula& g) {
    if (g.is_atom() && !seen.insert(g.relation()).second) ok = false;
  });
  return ok;
}

bool is_loose(const Formula& f) { return is_variable_loose(f) && is_symbol_loose(f); }

bool is_positive(const Formula& f) {
  bool ok = true;
  visit_preorder(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Not) ok = false;
  });
  return ok;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

Signature infer_signature(const Formula& f) {
  Signature sig;
  visit_preorder(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Quant)
      for (const auto& v : g.bound()) sig.add_sort(v.sort);
    if (!g.is_atom()) return;
    SortWord arity;
    for (const auto& v : g.args()) arity.push_back(v.sort);
    sig.add_relation(g.relation(), std::move(arity));
  });
  return sig;
}

void check_against(const Formula& f, const Signature& sig) {
  visit_preorder(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Quant) {
      for (const auto& v : g.bound())
        if (!sig.has_sort(v.sort)) throw SignatureError("unknown sort '" + v.sort + "' for variable '" + v.name + "'");
    }
    if (!g.is_atom()) return;
    const SortWord& arity = sig.arity(g.relation());
    if (arity.size() != g.args().size())
      throw SignatureError("relation '" + g.relation() + "' has arity " + std::to_string(arity.size()) + " but is applied to " +
                           std::to_string(g.args().size()) + " arguments");
    for (std::size_t i = 0; i < arity.size(); ++i) {
      if (arity[i] != g.args()[i].sort)
        throw SignatureError("argument " + std::to_string(i + 1) + " of '" + g.relation() + "' has sort '" +
                             g.args()[i].sort + "', expected '" + arity[i] + "'");
    }
  });
}

const Formula& subformula_at(const Formula& f, const Path& path) {
  const Formula* cur = &f;
  for (std::size_t idx : path) cur = &cur->child_at(idx);
  return *cur;
}

namespace {

Formula replace_rec(const Formula& f, const Path& path, std::size_t depth, const Formula& replacement) {
  if (depth == path.size()) return replacement;
  std::size_t idx = path[depth];
  switch (f.kind()) {
    case Formula::Kind::Atom:
      throw PreconditionError("path descends below an atom");
    case Formula::Kind::Not:
      if (idx != 0) throw PreconditionError("invalid path index under negation");
      return Formula::negation(replace_rec(f.child(), path, depth + 1, replacement));
    case Formula::Kind::Quant:
      if (idx != 0) throw PreconditionError("invalid path index under quantifier");
      return Formula::quantified(f.quantifier(), {f.bound().begin(), f.bound().end()},
                                 replace_rec(f.child(), path, depth + 1, replacement));
    case Formula::Kind::And:
    case Formula::Kind::Or:
      if (idx == 0) return Formula::binary(f.kind(), replace_rec(f.left(), path, depth + 1, replacement), f.right());
      if (idx == 1) return Formula::binary(f.kind(), f.left(), replace_rec(f.right(), path, depth + 1, replacement));
      throw PreconditionError("invalid path index under binary connective");
  }
  return f;
}

}  // namespace

Formula replace_at(const Formula& f, const Path& path, const Formula& replacement) {
  return replace_rec(f, path, 0, replacement);
}

std::string path_to_string(const Path& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(path[i]);
  }
  return out + "]";
}

Formula rename_free(const Formula& f, const std::map<Variable, Variable>& renaming) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Variable> args(f.args().begin(), f.args().end());
      for (auto& a : args) {
        auto it = renaming.find(a);
        if (it != renaming.end()) a = it->second;
      }
      return Formula::atom(f.relation(), std::move(args));
    }
    case Formula::Kind::Not:
      return Formula::negation(rename_free(f.child(), renaming));
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return Formula::binary(f.kind(), rename_free(f.left(), renaming), rename_free(f.right(), renaming));
    case Formula::Kind::Quant: {
      std::map<Variable, Variable> inner = renaming;
      for (const auto& v : f.bound()) inner.erase(v);
      return Formula::quantified(f.quantifier(), {f.bound().begin(), f.bound().end()}, rename_free(f.child(), inner));
    }
  }
  return f;
}

// ----------------------------------------------------------------- printing

namespace {

void print_rec(const Formula& f, std::set<std::string>& bound, std::ostream& os);

void print_operand(const Formula& f, bool parens, std::set<std::string>& bound, std::ostream& os) {
  if (parens) os << '(';
  print_rec(f, bound, os);
  if (parens) os << ')';
}

void print_rec(const Formula& f, std::set<std::string>& bound, std::ostream& os) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      os << f.relation() << '(';
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) os << ',';
        const Variable& v = f.args()[i];
        os << v.name;
        if (v.sort != kDefaultSort && !bound.count(v.name)) os << ':' << v.sort;
      }
      os << ')';
      return;
    }
    case K::Not: {
      const Formula& c = f.child();
      os << '!';
      print_operand(c, !(c.kind() == K::Atom || c.kind() == K::Not), bound, os);
      return;
    }
    case K::And:
    case K::Or: {
      const bool is_and = f.kind() == K::And;
      const Formula& l = f.left();
      const Formula& r = f.right();
      // Left operand: tighter or same connective is safe; quantifiers swallow the rest.
      bool lp = l.kind() == K::Quant || (is_and && l.kind() == K::Or);
      bool rp = r.kind() == K::Quant || r.kind() == f.kind() || (is_and && r.kind() == K::Or);
      print_operand(l, lp, bound, os);
      os << (is_and ? " & " : " | ");
      print_operand(r, rp, bound, os);
      return;
    }
    case K::Quant: {
      os << (f.quantifier() == Quantifier::Exists ? "exists" : "forall");
      for (const auto& v : f.bound()) {
        os << ' ' << v.name;
        if (v.sort != kDefaultSort) os << ':' << v.sort;
      }
      os << ". ";
      std::set<std::string> inner = bound;
      for (const auto& v : f.bound()) inner.insert(v.name);
      print_operand(f.child(), f.child().is_binary(), inner, os);
      return;
    }
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  std::set<std::string> bound;
  print_rec(f, bound, os);
  return os.str();
}

// ---------------------------------------------------------------- Structure

Structure::Structure(Signature signature) : signature_(std::move(signature)) {
  for (const auto& s : signature_.sorts()) universes_[s];
  for (const auto& [name, arity] : signature_.relations()) relations_[name];
}

void Structure::set_universe(const std::string& sort, std::vector<Element> elements) {
  signature_.add_sort(sort);
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  universes_[sort] = std::move(elements);
}

void Structure::declare_relation(const std::string& name, SortWord arity) {
  for (const auto& s : arity) universes_[s];
  signature_.add_relation(name, std::move(arity));
  relations_[name];
}

void Structure::set_relation(const std::string& name, std::set<Tuple> tuples) {
  if (!signature_.has_relation(name)) {
    if (tuples.empty()) throw SignatureError("cannot infer the arity of empty relation '" + name + "'");
    declare_relation(name, SortWord(tuples.begin()->size(), kDefaultSort));
  }
  const SortWord& arity = signature_.arity(name);
  for (const auto& t : tuples) {
    if (t.size() != arity.size()) throw SignatureError("tuple of wrong length for relation '" + name + "'");
  }
  relations_[name] = std::move(tuples);
}

void Structure::add_tuple(const std::string& name, Tuple tuple) {
  const SortWord& arity = signature_.arity(name);
  if (tuple.size() != arity.size()) throw SignatureError("tuple of wrong length for relation '" + name + "'");
  relations_[name].insert(std::move(tuple));
}

const std::vector<Element>& Structure::universe(const std::string& sort) const {
  auto it = universes_.find(sort);
  if (it == universes_.end()) throw SignatureError("structure has no sort '" + sort + "'");
  return it->second;
}

const std::set<Tuple>& Structure::relation(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw SignatureError("structure does not interpret '" + name + "'");
  return it->second;
}

bool Structure::contains(const std::string& sort, const Element& e) const {
  const auto& u = universe(sort);
  return std::binary_search(u.begin(), u.end(), e);
}

std::set<Tuple> Structure::full_relation(const std::string& name) const {
  const SortWord& arity = signature_.arity(name);
  std::set<Tuple> out;
  Tuple cur(arity.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == arity.size()) {
      out.insert(cur);
      return;
    }
    for (const auto& e : universe(arity[i])) {
      cur[i] = e;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::size_t Structure::max_universe_size() const {
  std::size_t m = 0;
  for (const auto& [sort, elems] : universes_) m = std::max(m, elems.size());
  return m;
}

void Structure::validate() const {
  for (const auto& s : signature_.sorts())
    if (!universes_.count(s)) throw SignatureError("sort '" + s + "' has no universe");
  for (const auto& [name, arity] : signature_.relations()) {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw SignatureError("relation '" + name + "' is not interpreted");
    for (const auto& t : it->second) {
      if (t.size() != arity.size()) throw SignatureError("tuple of wrong length in relation '" + name + "'");
      for (std::size_t i = 0; i < t.size(); ++i)
        if (!contains(arity[i], t[i]))
          throw SignatureError("element '" + t[i] + "' of relation '" + name + "' is outside universe of sort '" +
                               arity[i] + "'");
    }
  }
  for (const auto& [name, tuples] : relations_)
    if (!signature_.has_relation(name)) throw SignatureError("relation '" + name + "' is not in the signature");
}

// --------------------------------------------------------------- naive_eval

namespace {

using detail::Id;

struct Resolved {
  Formula::Kind kind;
  const detail::IndexedRelation* relation = nullptr;
  std::vector<std::size_t> slots;  // atom arguments or quantified block
  std::vector<std::size_t> sizes;  // universe size per quantified slot
  Quantifier quantifier = Quantifier::Exists;
  std::vector<Resolved> children;
};

class NaiveEvaluator {
 public:
  NaiveEvaluator(const detail::IndexedStructure& s) : s_(s) {}

  std::size_t slot_of(const Variable& v) {
    auto [it, inserted] = slots_.emplace(v, slots_.size());
    return it->second;
  }

  Resolved resolve(const Formula& f) {
    Resolved r;
    r.kind = f.kind();
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        const SortWord& arity = s_.source().signature().arity(f.relation());
        if (arity.size() != f.args().size())
          throw SignatureError("arity mismatch for relation '" + f.relation() + "'");
        for (std::size_t i = 0; i < arity.size(); ++i)
          if (arity[i] != f.args()[i].sort)
            throw SignatureError("sort mismatch in argument " + std::to_string(i + 1) + " of '" + f.relation() + "'");
        r.relation = &s_.relation(f.relation());
        for (const auto& v : f.args()) r.slots.push_back(slot_of(v));
        break;
      }
      case Formula::Kind::Quant:
        r.quantifier = f.quantifier();
        for (const auto& v : f.bound()) {
          r.slots.push_back(slot_of(v));
          r.sizes.push_back(s_.universe_size(v.sort));
        }
        r.children.push_back(resolve(f.child()));
        break;
      default:
        for (std::size_t i = 0; i < f.child_count(); ++i) r.children.push_back(resolve(f.child_at(i)));
    }
    return r;
  }

  void bind(const Variable& v, Id value) {
    std::size_t slot = slot_of(v);
    if (env_.size() <= slot) env_.resize(slot + 1);
    env_[slot] = value;
  }

  void size_env() { env_.resize(slots_.size()); }

  bool eval(const Resolved& r) {
    switch (r.kind) {
      case Formula::Kind::Atom: {
        buf_.resize(std::max(buf_.size(), r.slots.size()));
        for (std::size_t i = 0; i < r.slots.size(); ++i) buf_[i] = env_[r.slots[i]];
        return r.relation->contains(buf_.data());
      }
      case Formula::Kind::Not:
        return !eval(r.children[0]);
      case Formula::Kind::And:
        return eval(r.children[0]) && eval(r.children[1]);
      case Formula::Kind::Or:
        return eval(r.children[0]) || eval(r.children[1]);
      case Formula::Kind::Quant:
        return eval_block(r);
    }
    return false;
  }

 private:
  bool eval_block(const Resolved& r) {
    const bool exists = r.quantifier == Quantifier::Exists;
    for (std::size_t sz : r.sizes)
      if (sz == 0) return !exists;
    std::vector<Id> saved(r.slots.size());
    for (std::size_t i = 0; i < r.slots.size(); ++i) {
      saved[i] = env_[r.slots[i]];
      env_[r.slots[i]] = 0;
    }
    bool result = !exists;
    while (true) {
      bool v = eval(r.children[0]);
      if (v == exists) {
        result = exists;
        break;
      }
      std::size_t i = 0;
      for (; i < r.slots.size(); ++i) {
        if (++env_[r.slots[i]] < r.sizes[i]) break;
        env_[r.slots[i]] = 0;
      }
      if (i == r.slots.size()) break;
    }
    for (std::size_t i = 0; i < r.slots.size(); ++i) env_[r.slots[i]] = saved[i];
    return result;
  }

  const detail::IndexedStructure& s_;
  std::map<Variable, std::size_t> slots_;
  std::vector<Id> env_;
  std::vector<Id> buf_;
};

}  // namespace

bool naive_eval(const Structure& s, const Formula& f, const Assignment& assignment) {
  detail::IndexedStructure indexed(s);
  NaiveEvaluator ev(indexed);
  for (const auto& v : free_vars(f)) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw EvalError("free variable '" + v.name + "' is unassigned");
    ev.bind(v, indexed.id_of(v.sort, it->second));
  }
  Resolved root = ev.resolve(f);
  ev.size_env();
  return ev.eval(root);
}

}  // namespace folio
