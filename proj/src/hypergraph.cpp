#include "folio/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

namespace folio {

Hypergraph::Hypergraph(std::vector<VertexSet> edges) {
  for (auto& e : edges) add_edge(std::move(e));
}

Hypergraph::Hypergraph(VertexSet vertices, std::vector<VertexSet> edges) : vertices_(std::move(vertices)) {
  for (auto& e : edges) {
    for (const auto& v : e)
      if (!vertices_.count(v)) throw PreconditionError("edge vertex '" + v + "' is not in the vertex set");
    add_edge(std::move(e));
  }
}

void Hypergraph::add_edge(VertexSet e) {
  vertices_.insert(e.begin(), e.end());
  if (std::find(edges_.begin(), edges_.end(), e) == edges_.end()) edges_.push_back(std::move(e));
}

SimpleGraph primal_graph(const Hypergraph& h) {
  SimpleGraph g;
  g.vertices = h.vertices();
  for (const auto& e : h.edges())
    for (auto a = e.begin(); a != e.end(); ++a)
      for (auto b = std::next(a); b != e.end(); ++b) g.edges.insert(make_edge(*a, *b));
  return g;
}

bool s_connected(const std::vector<VertexSet>& edges, const VertexSet& s) {
  if (edges.size() <= 1) return true;
  std::vector<bool> reached(edges.size(), false);
  std::vector<std::size_t> stack{0};
  reached[0] = true;
  auto linked = [&](const VertexSet& a, const VertexSet& b) {
    for (const auto& v : a)
      if (b.count(v) && s.count(v)) return true;
    return false;
  };
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (!reached[j] && linked(edges[i], edges[j])) {
        reached[j] = true;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

bool s_connected(const Hypergraph& h, const VertexSet& s) { return s_connected(h.edges(), s); }

EliminationOrdering ordering_with_fill(const SimpleGraph& g, std::vector<Vertex> order) {
  EliminationOrdering e{std::move(order), g.edges};
  std::map<Vertex, std::size_t> pos;
  for (std::size_t i = 0; i < e.order.size(); ++i) pos[e.order[i]] = i;
  for (std::size_t k = e.order.size(); k-- > 0;) {
    std::vector<Vertex> lower;
    for (std::size_t i = 0; i < k; ++i)
      if (e.fill.count(make_edge(e.order[i], e.order[k]))) lower.push_back(e.order[i]);
    for (std::size_t a = 0; a < lower.size(); ++a)
      for (std::size_t b = a + 1; b < lower.size(); ++b) e.fill.insert(make_edge(lower[a], lower[b]));
  }
  return e;
}

bool is_valid_ordering(const SimpleGraph& g, const EliminationOrdering& e) {
  VertexSet seen(e.order.begin(), e.order.end());
  if (seen.size() != e.order.size() || seen != g.vertices) return false;
  for (const auto& edge : g.edges)
    if (!e.fill.count(edge)) return false;
  for (const auto& [a, b] : e.fill)
    if (!seen.count(a) || !seen.count(b) || a == b) return false;
  for (std::size_t k = 0; k < e.order.size(); ++k) {
    std::vector<Vertex> lower;
    for (std::size_t i = 0; i < k; ++i)
      if (e.fill.count(make_edge(e.order[i], e.order[k]))) lower.push_back(e.order[i]);
    for (std::size_t a = 0; a < lower.size(); ++a)
      for (std::size_t b = a + 1; b < lower.size(); ++b)
        if (!e.fill.count(make_edge(lower[a], lower[b]))) return false;
  }
  return true;
}

std::size_t lower_degree(const EliminationOrdering& e, const Vertex& v) {
  auto it = std::find(e.order.begin(), e.order.end(), v);
  if (it == e.order.end()) throw PreconditionError("vertex '" + v + "' is not in the ordering");
  std::size_t n = 0;
  for (auto jt = e.order.begin(); jt != it; ++jt) n += e.fill.count(make_edge(*jt, v));
  return n;
}

std::size_t lower_degree(const EliminationOrdering& e) {
  std::size_t best = 0;
  for (const auto& v : e.order) best = std::max(best, lower_degree(e, v));
  return best;
}

namespace {

using Mask = std::uint32_t;

// Subset dynamic program over "later" sets. For a suffix set S of the order
// and its first vertex v, the lower neighbors of v in the filled graph are the
// vertices outside S reachable from v through S.
class OrderingSearch {
 public:
  OrderingSearch(const SimpleGraph& g, std::size_t limit) {
    if (g.vertices.size() > limit)
      throw LimitError("treewidth search limited to " + std::to_string(limit) + " vertices, graph has " +
                       std::to_string(g.vertices.size()));
    if (g.vertices.size() > 30) throw LimitError("treewidth search supports at most 30 vertices");
    names_.assign(g.vertices.begin(), g.vertices.end());
    n_ = names_.size();
    adj_.assign(n_, 0);
    std::map<Vertex, std::size_t> idx;
    for (std::size_t i = 0; i < n_; ++i) idx[names_[i]] = i;
    for (const auto& [a, b] : g.edges) {
      adj_[idx[a]] |= Mask{1} << idx[b];
      adj_[idx[b]] |= Mask{1} << idx[a];
    }
  }

  std::size_t size() const { return n_; }
  const std::vector<Vertex>& names() const { return names_; }

  // `tail` holds the vertices that must come after all the others.
  void solve(Mask tail) {
    tail_ = tail;
    const Mask full = n_ == 32 ? ~Mask{0} : (Mask{1} << n_) - 1;
    full_ = full;
    best_.assign(std::size_t{1} << n_, kUnset);
    best_[0] = 0;
    for (Mask s = 1; s <= full && s != 0; ++s) {
      if (!allowed(s)) continue;
      std::uint8_t b = kUnset;
      for (Mask rest = s; rest; rest &= rest - 1) {
        std::size_t v = std::countr_zero(rest);
        Mask later = s & ~(Mask{1} << v);
        if (!allowed(later) || best_[later] == kUnset) continue;
        std::uint8_t cost = std::max<std::uint8_t>(best_[later], lower_count(later, v));
        b = std::min(b, cost);
      }
      best_[s] = b;
      if (s == full) break;
    }
  }

  std::size_t value() const { return n_ == 0 ? 0 : best_[full_]; }

  std::vector<Vertex> order() const {
    std::vector<Vertex> out;
    Mask s = full_;
    while (s) {
      for (Mask rest = s; rest; rest &= rest - 1) {
        std::size_t v = std::countr_zero(rest);
        Mask later = s & ~(Mask{1} << v);
        if (!allowed(later) || best_[later] == kUnset) continue;
        if (std::max<std::uint8_t>(best_[later], lower_count(later, v)) == best_[s]) {
          out.push_back(names_[v]);
          s = later;
          break;
        }
      }
    }
    return out;
  }

 private:
  static constexpr std::uint8_t kUnset = std::numeric_limits<std::uint8_t>::max();

  // Later sets are either inside the tail or contain all of it.
  bool allowed(Mask s) const { return (s & ~tail_) == 0 || (s & tail_) == tail_; }

  std::uint8_t lower_count(Mask later, std::size_t v) const {
    Mask comp = Mask{1} << v;
    Mask frontier = comp;
    Mask boundary = 0;
    while (frontier) {
      std::size_t u = std::countr_zero(frontier);
      frontier &= frontier - 1;
      Mask nb = adj_[u];
      Mask inside = nb & later & ~comp;
      comp |= inside;
      frontier |= inside;
      boundary |= nb;
    }
    boundary &= ~(later | (Mask{1} << v));
    return static_cast<std::uint8_t>(std::popcount(boundary));
  }

  std::vector<Vertex> names_;
  std::size_t n_ = 0;
  std::vector<Mask> adj_;
  Mask tail_ = 0;
  Mask full_ = 0;
  std::vector<std::uint8_t> best_;
};

}  // namespace

std::size_t treewidth(const Hypergraph& h, std::size_t limit) {
  OrderingSearch search(primal_graph(h), limit);
  if (search.size() == 0) return 0;
  const Mask all = (Mask{1} << search.size()) - 1;
  search.solve(all);
  return search.value();
}

EliminationOrdering elimination_ordering_with_prefix(const Hypergraph& h, const VertexSet& f, std::size_t limit) {
  for (const auto& v : f)
    if (!h.vertices().count(v)) throw PreconditionError("prefix vertex '" + v + "' is not a vertex of the hypergraph");
  SimpleGraph g = primal_graph(h);
  OrderingSearch search(g, limit);
  if (search.size() == 0) return EliminationOrdering{};
  Mask tail = 0;
  for (std::size_t i = 0; i < search.size(); ++i)
    if (!f.count(search.names()[i])) tail |= Mask{1} << i;
  search.solve(tail);
  std::size_t constrained = search.value();
  EliminationOrdering e = ordering_with_fill(g, search.order());

  const Mask all = (Mask{1} << search.size()) - 1;
  if (tail != all) {
    OrderingSearch free_search(g, limit);
    free_search.solve(all);
    if (free_search.value() != constrained)
      throw PreconditionError("no elimination ordering with the requested prefix reaches the treewidth");
  }
  return e;
}

std::string to_dot(const Hypergraph& h) {
  std::ostringstream os;
  os << "graph hypergraph {\n";
  for (const auto& v : h.vertices()) os << "  \"" << v << "\";\n";
  for (std::size_t i = 0; i < h.edges().size(); ++i) {
    os << "  \"e" << i << "\" [shape=box, label=\"{";
    bool first = true;
    for (const auto& v : h.edges()[i]) {
      os << (first ? "" : ",") << v;
      first = false;
    }
    os << "}\"];\n";
    for (const auto& v : h.edges()[i]) os << "  \"e" << i << "\" -- \"" << v << "\" [style=dotted];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const SimpleGraph& g, const EliminationOrdering& e) {
  std::ostringstream os;
  os << "graph ordering {\n";
  for (std::size_t i = 0; i < e.order.size(); ++i)
    os << "  \"" << e.order[i] << "\" [label=\"" << i + 1 << ": " << e.order[i] << "\"];\n";
  for (const auto& [a, b] : e.fill)
    os << "  \"" << a << "\" -- \"" << b << "\"" << (g.edges.count({a, b}) ? "" : " [style=dashed]") << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace folio
