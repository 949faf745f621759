#include "folio/thickness.hpp"

#include <algorithm>
#include <set>

#include "folio/normalize.hpp"

namespace folio {

namespace {

using K = Formula::Kind;

K connective_of(Quantifier q) { return q == Quantifier::Exists ? K::And : K::Or; }

VertexSet names_of(const VarSet& vars) {
  VertexSet out;
  for (const auto& v : vars) out.insert(v.name);
  return out;
}

const Formula& require_block(const Formula& f, const char* what) {
  if (f.kind() != K::Quant) throw PreconditionError(std::string(what) + " requires a quantifier block: " + print_formula(f));
  return f;
}

std::size_t thickness_layered_rec(const Formula& f, std::size_t limit) {
  if (f.is_literal()) return free_vars(f).size();
  std::size_t best = local_thickness(f, limit);
  for (const auto& kid : flatten(f.child(), connective_of(f.quantifier())))
    best = std::max(best, thickness_layered_rec(kid, limit));
  return best;
}

void collect_positive(const Formula& f, Path& path, std::vector<std::pair<Path, Formula>>& out) {
  if (!f.is_binary()) {
    out.emplace_back(path, f);
    return;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    path.push_back(i);
    collect_positive(f.child_at(i), path, out);
    path.pop_back();
  }
}

// Members of the spine below a quantifier, with their paths.
void spine_members(const Formula& f, K conn, Path& path, std::vector<std::pair<Path, Formula>>& out) {
  if (f.kind() != conn) {
    out.emplace_back(path, f);
    return;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    path.push_back(i);
    spine_members(f.child_at(i), conn, path, out);
    path.pop_back();
  }
}

void record_nodes(const Formula& f, Path& path, std::size_t limit, std::map<std::string, NodeThickness>& out) {
  if (f.kind() != K::Quant) {
    for (std::size_t i = 0; i < f.child_count(); ++i) {
      path.push_back(i);
      record_nodes(f.child_at(i), path, limit, out);
      path.pop_back();
    }
    return;
  }
  out[path_to_string(path)] = {local_thickness(f, limit), quantified_thickness(f, limit)};
  std::vector<std::pair<Path, Formula>> members;
  path.push_back(0);
  spine_members(f.child(), connective_of(f.quantifier()), path, members);
  path.pop_back();
  for (auto& [p, m] : members) record_nodes(m, p, limit, out);
}

// Algorithm A: children first, then the block's own elimination ordering.
Formula eliminate_block(const Formula& f, std::size_t limit) {
  if (f.is_literal()) return f;
  if (f.is_binary()) return Formula::binary(f.kind(), eliminate_block(f.left(), limit), eliminate_block(f.right(), limit));
  Block b = Block::from(f);
  for (auto& kid : b.children) kid = eliminate_block(kid, limit);
  EliminationOrdering e = elimination_ordering_with_prefix(block_hypergraph(b), names_of(b.free()), limit);
  while (!b.vars.empty()) {
    const std::size_t bound = 1 + lower_degree(e);
    std::size_t kids = 0;
    for (const auto& kid : b.children) kids = std::max(kids, block_width(kid));
    std::tie(b, e) = eliminate_last_variable(b, e);
    if (block_width(b.to_formula()) > std::max(bound, kids))
      throw Error("internal: elimination step exceeded its width bound");
  }
  return b.to_formula();
}

void first_appearance(const Formula& f, std::vector<Variable>& order, std::set<Variable>& seen) {
  auto note = [&](const Variable& v) {
    if (seen.insert(v).second) order.push_back(v);
  };
  if (f.is_atom()) {
    for (const auto& v : f.args()) note(v);
    return;
  }
  if (f.kind() == K::Quant)
    for (const auto& v : f.bound()) note(v);
  for (std::size_t i = 0; i < f.child_count(); ++i) first_appearance(f.child_at(i), order, seen);
}

class Renamer {
 public:
  Renamer(const Formula& original, const VarSet& free) {
    for (const auto& v : free) add(v.name, v.sort);
    std::vector<Variable> order;
    std::set<Variable> seen;
    first_appearance(original, order, seen);
    for (const auto& v : order) add(v.name, v.sort);
  }

  Formula run(const Formula& f, std::map<Variable, std::string>& env) {
    switch (f.kind()) {
      case K::Atom: {
        std::vector<Variable> args(f.args().begin(), f.args().end());
        for (auto& a : args)
          if (auto it = env.find(a); it != env.end()) a.name = it->second;
        return Formula::atom(f.relation(), std::move(args));
      }
      case K::Not:
        return Formula::negation(run(f.child(), env));
      case K::And:
      case K::Or: {
        Formula l = run(f.left(), env);
        Formula r = run(f.right(), env);
        return Formula::binary(f.kind(), l, r);
      }
      case K::Quant: {
        std::set<std::string> busy;
        for (const auto& v : free_vars(f)) busy.insert(image(v, env));
        std::map<Variable, std::string> inner = env;
        std::vector<Variable> vars;
        for (const auto& v : f.bound()) {
          std::string name = pick(v.sort, busy);
          busy.insert(name);
          inner[v] = name;
          vars.push_back({name, v.sort});
        }
        return Formula::quantified(f.quantifier(), std::move(vars), run(f.child(), inner));
      }
    }
    return f;
  }

 private:
  static std::string image(const Variable& v, const std::map<Variable, std::string>& env) {
    auto it = env.find(v);
    return it == env.end() ? v.name : it->second;
  }

  void add(const std::string& name, const std::string& sort) {
    if (sort_of_.emplace(name, sort).second) pool_.push_back(name);
  }

  // Lowest pool name of the right sort that is not busy; names are never shared across sorts.
  std::string pick(const std::string& sort, const std::set<std::string>& busy) {
    for (const auto& name : pool_)
      if (sort_of_.at(name) == sort && !busy.count(name)) return name;
    for (std::size_t k = 1;; ++k) {
      std::string name = "v" + std::to_string(k);
      if (sort_of_.count(name)) continue;
      add(name, sort);
      return name;
    }
  }

  std::vector<std::string> pool_;
  std::map<std::string, std::string> sort_of_;
};

}  // namespace

Block Block::from(const Formula& f) {
  require_block(f, "Block::from");
  return Block{f.quantifier(), {f.bound().begin(), f.bound().end()}, flatten(f.child(), connective_of(f.quantifier()))};
}

Formula Block::to_formula() const {
  Formula body = combine(connective_of(quantifier), children);
  if (vars.empty()) return body;
  return Formula::quantified(quantifier, vars, body);
}

VarSet Block::free() const {
  VarSet out;
  for (const auto& kid : children) {
    VarSet fv = free_vars(kid);
    out.insert(fv.begin(), fv.end());
  }
  for (const auto& v : vars) out.erase(v);
  return out;
}

Hypergraph block_hypergraph(const Block& b) {
  VertexSet vertices = names_of(b.free());
  for (const auto& v : b.vars) vertices.insert(v.name);
  std::vector<VertexSet> edges;
  for (const auto& kid : b.children) edges.push_back(names_of(free_vars(kid)));
  edges.push_back(names_of(b.free()));
  return Hypergraph(std::move(vertices), std::move(edges));
}

std::size_t local_thickness(const Formula& f, std::size_t tw_limit) {
  require_block(f, "local_thickness");
  std::vector<VertexSet> edges;
  for (const auto& kid : flatten(f.child(), connective_of(f.quantifier()))) edges.push_back(names_of(free_vars(kid)));
  edges.push_back(names_of(free_vars(f)));
  return 1 + treewidth(Hypergraph(std::move(edges)), tw_limit);
}

std::size_t quantified_thickness(const Formula& f, std::size_t tw_limit) {
  require_block(f, "quantified_thickness");
  VertexSet bound;
  for (const auto& v : f.bound()) bound.insert(v.name);
  std::vector<VertexSet> edges;
  for (const auto& kid : flatten(f.child(), connective_of(f.quantifier()))) {
    VertexSet e;
    for (const auto& n : names_of(free_vars(kid)))
      if (bound.count(n)) e.insert(n);
    edges.push_back(std::move(e));
  }
  return 1 + treewidth(Hypergraph(std::move(edges)), tw_limit);
}

std::size_t thickness_layered(const Formula& f, std::size_t tw_limit) {
  if (!is_layered(f)) throw PreconditionError("thickness_layered requires a layered formula: " + print_formula(f));
  return thickness_layered_rec(f, tw_limit);
}

std::size_t thickness(const Formula& f, std::size_t tw_limit) {
  std::size_t best = 0;
  for (const auto& [path, leaf] : positively_combined_subformulas(lay(f)))
    best = std::max(best, thickness_layered_rec(leaf, tw_limit));
  return best;
}

std::vector<std::pair<Path, Formula>> positively_combined_subformulas(const Formula& f) {
  std::vector<std::pair<Path, Formula>> out;
  Path path;
  collect_positive(f, path, out);
  return out;
}

std::size_t block_width(const Formula& f) {
  std::size_t best = free_vars(f).size();
  if (f.kind() == K::Quant) {
    for (const auto& kid : flatten(f.child(), connective_of(f.quantifier()))) best = std::max(best, block_width(kid));
  } else {
    for (std::size_t i = 0; i < f.child_count(); ++i) best = std::max(best, block_width(f.child_at(i)));
  }
  return best;
}

std::pair<Block, EliminationOrdering> eliminate_last_variable(const Block& b, const EliminationOrdering& e) {
  if (b.vars.empty()) throw PreconditionError("eliminate_last_variable requires a nonempty block");
  if (e.order.empty()) throw PreconditionError("empty elimination ordering");
  const VarSet fv = b.free();
  const VertexSet free_names = names_of(fv);
  for (std::size_t i = 0; i < free_names.size(); ++i)
    if (i >= e.order.size() || !free_names.count(e.order[i]))
      throw PreconditionError("elimination ordering must start with the free variables of the block");
  const Hypergraph h = block_hypergraph(b);
  if (VertexSet(e.order.begin(), e.order.end()) != h.vertices())
    throw PreconditionError("elimination ordering does not cover the block's variables");
  if (!is_valid_ordering(primal_graph(h), e)) throw PreconditionError("not an elimination ordering of the block");

  const Vertex last = e.order.back();
  auto vit = std::find_if(b.vars.begin(), b.vars.end(), [&](const Variable& v) { return v.name == last; });
  if (vit == b.vars.end()) throw PreconditionError("last vertex '" + last + "' is not quantified by the block");
  const Variable v = *vit;

  Block out{b.quantifier, {}, {}};
  for (const auto& w : b.vars)
    if (w != v) out.vars.push_back(w);
  std::vector<Formula> group;
  for (const auto& kid : b.children) {
    if (free_vars(kid).count(v))
      group.push_back(kid);
    else
      out.children.push_back(kid);
  }
  if (!group.empty())
    out.children.push_back(Formula::quantified(b.quantifier, {v}, combine(connective_of(b.quantifier), group)));

  EliminationOrdering rest;
  rest.order.assign(e.order.begin(), e.order.end() - 1);
  for (const auto& edge : e.fill)
    if (edge.first != last && edge.second != last) rest.fill.insert(edge);
  return {std::move(out), std::move(rest)};
}

Formula minimize_variables(const Formula& f, std::size_t tw_limit) {
  Formula eliminated = eliminate_block(lay(f), tw_limit);
  std::map<Variable, std::string> env;
  return Renamer(f, free_vars(f)).run(eliminated, env);
}

AnalysisReport analyze(const Formula& f, std::size_t tw_limit) {
  AnalysisReport r;
  Formula layered = lay(f);
  r.layered = print_formula(layered);
  for (const auto& [path, leaf] : positively_combined_subformulas(layered)) {
    r.thickness = std::max(r.thickness, thickness_layered_rec(leaf, tw_limit));
    Path p = path;
    record_nodes(leaf, p, tw_limit, r.per_node);
  }
  Formula rewritten = minimize_variables(f, tw_limit);
  r.rewritten = print_formula(rewritten);
  r.width_before = width(f);
  r.width_after = width(rewritten);
  std::set<std::string> names;
  for (const auto& v : all_vars(rewritten)) names.insert(v.name);
  r.variables_used_after = names.size();
  return r;
}

nlohmann::json to_json(const AnalysisReport& r) {
  nlohmann::json j;
  j["thickness"] = r.thickness;
  j["width_before"] = r.width_before;
  j["width_after"] = r.width_after;
  j["variables_used_after"] = r.variables_used_after;
  j["layered"] = r.layered;
  j["rewritten"] = r.rewritten;
  j["per_node"] = nlohmann::json::array();
  for (const auto& [path, t] : r.per_node)
    j["per_node"].push_back({{"path", path}, {"local", t.local}, {"quantified", t.quantified}});
  return j;
}

}  // namespace folio
