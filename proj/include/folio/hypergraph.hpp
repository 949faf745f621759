#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "folio/error.hpp"

namespace folio {

using Vertex = std::string;
using VertexSet = std::set<Vertex>;
using Edge2 = std::pair<Vertex, Vertex>;  // first < second

inline Edge2 make_edge(const Vertex& a, const Vertex& b) { return a < b ? Edge2{a, b} : Edge2{b, a}; }

struct SimpleGraph {
  VertexSet vertices;
  std::set<Edge2> edges;

  bool adjacent(const Vertex& a, const Vertex& b) const { return edges.count(make_edge(a, b)) != 0; }
};

class Hypergraph {
 public:
  Hypergraph() = default;
  // Vertex set is the union of the edges.
  explicit Hypergraph(std::vector<VertexSet> edges);
  Hypergraph(VertexSet vertices, std::vector<VertexSet> edges);

  const VertexSet& vertices() const { return vertices_; }
  // Duplicates are kept out; the empty edge is allowed.
  const std::vector<VertexSet>& edges() const { return edges_; }

  void add_edge(VertexSet e);

 private:
  VertexSet vertices_;
  std::vector<VertexSet> edges_;
};

SimpleGraph primal_graph(const Hypergraph& h);

// Connectivity of the graph on E(H) joining two edges when they share a vertex of s.
bool s_connected(const Hypergraph& h, const VertexSet& s);
bool s_connected(const std::vector<VertexSet>& edges, const VertexSet& s);

struct EliminationOrdering {
  std::vector<Vertex> order;
  std::set<Edge2> fill;  // the superset E' of the graph's edges
};

// Fill set obtained by eliminating the order from its last vertex down.
EliminationOrdering ordering_with_fill(const SimpleGraph& g, std::vector<Vertex> order);

// Checks the definition literally: order is a permutation of V, fill contains
// every graph edge, and any two distinct lower neighbors of a vertex are adjacent.
bool is_valid_ordering(const SimpleGraph& g, const EliminationOrdering& e);

std::size_t lower_degree(const EliminationOrdering& e, const Vertex& v);
std::size_t lower_degree(const EliminationOrdering& e);

inline constexpr std::size_t kDefaultTreewidthLimit = 20;

// Exact treewidth of the primal graph by dynamic programming over vertex
// subsets. Throws LimitError above `limit` vertices.
std::size_t treewidth(const Hypergraph& h, std::size_t limit = kDefaultTreewidthLimit);

// Optimal ordering whose first |f| vertices are exactly f; ties broken toward
// lexicographically smaller vertex names. Throws PreconditionError when f is
// not a vertex subset and LimitError above `limit` vertices.
EliminationOrdering elimination_ordering_with_prefix(const Hypergraph& h, const VertexSet& f,
                                                     std::size_t limit = kDefaultTreewidthLimit);

std::string to_dot(const Hypergraph& h);
std::string to_dot(const SimpleGraph& g, const EliminationOrdering& e);

}  // namespace folio
