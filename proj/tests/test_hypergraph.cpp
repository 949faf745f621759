#include <doctest.h>

#include "folio/random.hpp"
#include "oracles.hpp"

using namespace folio;

namespace {

Hypergraph H(std::vector<VertexSet> edges) { return Hypergraph(std::move(edges)); }

Hypergraph path_graph(std::size_t n) {
  std::vector<VertexSet> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({"p" + std::to_string(i), "p" + std::to_string(i + 1)});
  return Hypergraph(std::move(edges));
}

Hypergraph clique(std::size_t n) {
  std::vector<VertexSet> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({"k" + std::to_string(i), "k" + std::to_string(j)});
  if (n == 1) edges.push_back({"k0"});
  return Hypergraph(std::move(edges));
}

Hypergraph grid(std::size_t n) {
  std::vector<VertexSet> edges;
  auto name = [](std::size_t r, std::size_t c) { return "g" + std::to_string(r) + std::to_string(c); };
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r + 1 < n) edges.push_back({name(r, c), name(r + 1, c)});
      if (c + 1 < n) edges.push_back({name(r, c), name(r, c + 1)});
    }
  return Hypergraph(std::move(edges));
}

}  // namespace

TEST_CASE("primal graph") {
  SimpleGraph tri = primal_graph(H({{"a", "b", "c"}}));
  CHECK(tri.edges.size() == 3);
  CHECK(primal_graph(H({{"a"}, {"b"}})).edges.empty());
  SimpleGraph p = primal_graph(H({{"a", "b"}, {"b", "c"}}));
  CHECK(p.edges == std::set<Edge2>{{"a", "b"}, {"b", "c"}});
}

TEST_CASE("s-connectivity") {
  CHECK(s_connected(H({{"x", "x2"}, {"x", "y"}}), {"x", "x2"}));
  CHECK_FALSE(s_connected(H({{"x"}, {"z"}}), {"x", "z"}));
  CHECK(s_connected(H({{"a", "b"}}), {}));
}

TEST_CASE("lower degree of orderings") {
  SimpleGraph p = primal_graph(H({{"a", "b"}, {"b", "c"}}));
  EliminationOrdering e = ordering_with_fill(p, {"a", "b", "c"});
  CHECK(e.fill == p.edges);
  CHECK(lower_degree(e) == 1);
  CHECK(lower_degree(ordering_with_fill(primal_graph(H({{"a"}})), {"a"})) == 0);
  SimpleGraph k3 = primal_graph(H({{"a", "b", "c"}}));
  CHECK(lower_degree(ordering_with_fill(k3, {"c", "a", "b"})) == 2);
}

TEST_CASE("ordering validity is checked literally") {
  SimpleGraph c4 = primal_graph(H({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}}));
  EliminationOrdering e = ordering_with_fill(c4, {"a", "b", "c", "d"});
  CHECK(is_valid_ordering(c4, e));
  EliminationOrdering bad = e;
  bad.fill = c4.edges;
  CHECK_FALSE(is_valid_ordering(c4, bad));
  bad = e;
  bad.order.pop_back();
  CHECK_FALSE(is_valid_ordering(c4, bad));
}

TEST_CASE("treewidth of standard families") {
  for (std::size_t k = 2; k <= 6; ++k) CHECK(treewidth(clique(k)) == k - 1);
  CHECK(treewidth(path_graph(4)) == 1);
  CHECK(treewidth(H({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}})) == 2);
  CHECK(treewidth(grid(3)) == 3);
  CHECK(oracle::treewidth(grid(3)) == 3);
  CHECK(treewidth(Hypergraph()) == 0);
}

TEST_CASE("treewidth limit") {
  CHECK_THROWS_AS(treewidth(path_graph(25)), LimitError);
  CHECK(treewidth(path_graph(25), 30) == 1);
}

TEST_CASE("treewidth matches the permutation oracle on random hypergraphs") {
  Rng rng(7);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    Hypergraph h = random_hypergraph(rng, n, n + 2, 3);
    CHECK(treewidth(h) == oracle::treewidth(h));
  }
}

TEST_CASE("ordering with a distinguished prefix") {
  Hypergraph h({{"a", "b"}, {"b", "c"}, {"c", "d"}});
  EliminationOrdering e = elimination_ordering_with_prefix(h, {"a", "b"});
  CHECK(e.order == std::vector<Vertex>{"a", "b", "c", "d"});
  CHECK(lower_degree(e) == 1);
  CHECK(is_valid_ordering(primal_graph(h), e));

  EliminationOrdering k3 = elimination_ordering_with_prefix(H({{"a", "b", "c"}}), {"a", "b"});
  CHECK(std::set<Vertex>(k3.order.begin(), k3.order.begin() + 2) == VertexSet{"a", "b"});
  CHECK(lower_degree(k3) == 2);

  EliminationOrdering single = elimination_ordering_with_prefix(H({{"a"}}), {"a"});
  CHECK(single.order == std::vector<Vertex>{"a"});
  CHECK(single.fill.empty());

  CHECK_THROWS_AS(elimination_ordering_with_prefix(h, {"z"}), PreconditionError);
}

TEST_CASE("DOT output names every vertex") {
  std::string dot = to_dot(H({{"x", "y"}}));
  CHECK(dot.find("\"x\"") != std::string::npos);
  CHECK(dot.find("\"y\"") != std::string::npos);
}
