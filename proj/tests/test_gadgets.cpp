#include <doctest.h>

#include "folio/gadgets.hpp"
#include "folio/parser.hpp"
#include "folio/random.hpp"
#include "oracles.hpp"

using namespace folio;

namespace {

Formula p(const char* text) { return parse_formula(text); }

Structure e_structure(std::vector<Element> u, std::set<Tuple> e) {
  Structure s;
  s.set_universe(kDefaultSort, std::move(u));
  s.declare_relation("E", {kDefaultSort, kDefaultSort});
  s.set_relation("E", std::move(e));
  return s;
}

const char* kTheta = "exists x1 x2 x3. (F1(x1,x2) & F2(x1,x3) & F3(x2,x3))";

Graph graph(const char* text) { return parse_edge_list(text); }

// Structure over the two-sort signature of the disjunction example.
Structure pair_structure(std::set<Tuple> e1) {
  Structure a;
  a.set_universe("W1", {"a1"});
  a.set_universe("W2", {"a2"});
  a.declare_relation("E1", {"W1", "W2"});
  a.set_relation("E1", std::move(e1));
  return a;
}

}  // namespace

TEST_CASE("simple subformulas") {
  CHECK(is_simple(p("exists x y. (E(x,y) & F(y,z))")));
  CHECK_FALSE(is_simple(p("exists x. (E(x,y) | F(x,z))")));
  CHECK(is_simple(p("forall x. (E(x,y) | F(x,z))")));
  CHECK_FALSE(is_simple(p("exists x. !E(x,x)")));
  auto found = simple_subformulas(p("forall w. ((exists v. (R(w,v) & S(w,v))) | T(w))"));
  REQUIRE(found.size() == 1);
  CHECK(found[0].path == Path{0, 0});
  CHECK(found[0].free == VarSet{Variable{"w"}});
}

TEST_CASE("trivial relations force the context") {
  Structure base = e_structure({"1", "2"}, {{"1", "2"}});
  const Formula inner = p("exists x. E(x,x)");
  const std::vector<std::pair<const char*, Path>> cases = {
      {"(exists x. E(x,x)) & (exists z. R(z))", {0}},
      {"(exists x. E(x,x)) | (exists z. R(z))", {0}},
      {"(exists x. E(x,x)) | (exists z. !R(z))", {0}},
      {"((exists x. E(x,x)) | (exists u. T(u,u))) & (forall u. P(u))", {0, 0}},
  };
  for (const auto& [text, path] : cases) {
    Formula phi = parse_formula(text);
    for (const auto& rows : {std::set<Tuple>{}, std::set<Tuple>{{"2", "2"}}}) {
      Structure b = base;
      b.set_relation("E", rows);
      CHECK(oracle::eval(fill_trivial_relations(phi, path, b), phi) == oracle::eval(b, inner));
    }
  }
  Structure conj = fill_trivial_relations(p("(exists x. E(x,x)) & (exists z. R(z))"), {0}, base);
  CHECK(conj.relation("R").size() == 2);
  Structure disj = fill_trivial_relations(p("(exists x. E(x,x)) | (exists z. R(z))"), {0}, base);
  CHECK(disj.relation("R").empty());
  Structure neg = fill_trivial_relations(p("(exists x. E(x,x)) | (exists z. !R(z))"), {0}, base);
  CHECK(neg.relation("R").size() == 2);
}

TEST_CASE("complementing negated relations") {
  auto [psi, s] = complement_structure(p("exists x. !E(x,x)"), e_structure({"1", "2"}, {{"1", "1"}}));
  CHECK(print_formula(psi) == "exists x. E(x,x)");
  CHECK(s.relation("E") == std::set<Tuple>{{"1", "2"}, {"2", "1"}, {"2", "2"}});
  CHECK(oracle::eval(s, psi));

  Structure plain = e_structure({"1", "2"}, {{"1", "1"}});
  auto [same, unchanged] = complement_structure(p("exists x. E(x,x)"), plain);
  CHECK(unchanged == plain);

  Structure full = e_structure({"1"}, {{"1", "1"}});
  auto [psi2, s2] = complement_structure(p("exists x. !E(x,x)"), full);
  CHECK(s2.relation("E").empty());
  CHECK_FALSE(oracle::eval(s2, psi2));
}

TEST_CASE("full sorts") {
  Formula f = full_sort(p("exists x y. E(x,y)"));
  CHECK(infer_signature(f).arity("E") == SortWord{"x", "y"});
  CHECK(infer_signature(f).sorts() == std::set<std::string>{"x", "y"});
  Formula laid = full_sort(p("forall y1 y2. exists x. (E1(y1,x) & E2(y2,x))"));
  CHECK(infer_signature(laid).arity("E1") == SortWord{"y1", "x"});
  CHECK(infer_signature(laid).arity("E2") == SortWord{"y2", "x"});
}

TEST_CASE("sort collapse") {
  Formula psi = p("exists x y. E(x,y)");
  Formula full = full_sort(psi);
  Structure s(infer_signature(full));
  s.set_universe("x", {"a"});
  s.set_universe("y", {"b1", "b2"});
  for (std::set<Tuple> rows : {std::set<Tuple>{}, std::set<Tuple>{{"a", "b2"}}}) {
    s.set_relation("E", rows);
    Structure c = collapse_sorts(psi, s);
    CHECK(c.universe(kDefaultSort).size() == 2);
    CHECK(c.relation("E").size() == 2 * rows.size());
    CHECK(oracle::eval(c, psi) == oracle::eval(s, full));
  }
}

TEST_CASE("accordion pair and based sentence") {
  Formula phi = p("forall w1 w2. ((exists v. (R(w1,v) & S(w2,v))) | T(w1))");
  CHECK(print_formula(make_accordion_pair(phi, {0, 0})) == "forall w1 w2. (__acc_1(w1,w2) | T(w1))");
  CHECK(print_formula(based_sentence(phi, {0, 0})) == "exists v. (__acc_base_R(v) & __acc_base_S(v))");
}

TEST_CASE("accordion, disjunction case") {
  Formula phi = p("exists w1:W1 w2:W2. (exists v:V. (R(w1,v) & S(w2,v)))");
  Formula psi = p("exists w1:W1 w2:W2. E1(w1,w2)");
  AccordionResult r = accordion_step(psi, phi, pair_structure({{"a1", "a2"}}));
  CHECK(r.which == AccordionCase::Disjunction);
  CHECK(r.structure.universe("V") == std::vector<Element>{"E1|w1|a1", "E1|w2|a2"});
  CHECK(oracle::eval(r.structure, phi));
  CHECK(r.measure_out == 2);
  CHECK(r.measure_out <= r.measure_bound);

  AccordionResult none = accordion_step(psi, phi, pair_structure({}));
  CHECK_FALSE(oracle::eval(none.structure, phi));
}

TEST_CASE("accordion, conjunction case") {
  Formula phi = p("exists w1:W1 w2:W2. (forall v:V. (R(w1,v) | S(w2,v)))");
  Formula psi = p("exists w1:W1 w2:W2. E1(w1,w2)");
  for (auto rows : {std::set<Tuple>{}, std::set<Tuple>{{"a1", "a2"}}}) {
    Structure a = pair_structure(rows);
    AccordionResult r = accordion_step(psi, phi, a);
    CHECK(r.which == AccordionCase::Conjunction);
    CHECK(oracle::eval(r.structure, phi) == oracle::eval(a, psi));
  }
}

TEST_CASE("accordion with three free variables") {
  for (const char* text : {"exists w1 w2 w3. (exists v:V. (R(w1,v) & S(w2,v) & T(w3,v)))",
                           "exists w1 w2 w3. (forall v:V. (R(w1,v) | S(w2,v) | T(w3,v)))"}) {
    Formula phi = p(text);
    Formula psi = make_accordion_pair(phi, {0});
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
      Structure a = random_structure(rng, infer_signature(psi), 2);
      AccordionResult r = accordion_step(psi, phi, a);
      CHECK(oracle::eval(r.structure, phi) == oracle::eval(a, psi));
    }
  }
}

TEST_CASE("accordion, based case") {
  Formula phi = p("forall w. ((exists v. (R(w,v) & S(w,v))) | T(w))");
  Formula psi = based_sentence(phi, {0, 0});
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    Structure a = random_structure(rng, infer_signature(psi), 3);
    AccordionResult r = accordion_step(psi, phi, a);
    CHECK(r.which == AccordionCase::Based);
    CHECK(oracle::eval(r.structure, phi) == oracle::eval(a, psi));
  }
}

TEST_CASE("accordion rejects unrelated pairs") {
  CHECK_THROWS_AS(accordion_step(p("exists x. P(x)"), p("exists x y. (E(x,y) & F(y,x))"),
                                 e_structure({"1"}, {})),
                  Error);
}

TEST_CASE("existential clique witnesses") {
  auto w = find_existential_clique(p(kTheta), 3);
  REQUIRE(w.has_value());
  CHECK(w->vars.size() == 3);
  CHECK(w->atoms.size() == 3);
  CHECK_FALSE(find_existential_clique(p(kTheta), 4).has_value());
  CHECK_FALSE(find_existential_clique(p("forall x1 x2 x3. (F1(x1,x2) | F2(x1,x3) | F3(x2,x3))"), 2).has_value());
}

TEST_CASE("clique gadget on small graphs") {
  Formula theta = p(kTheta);
  CHECK(oracle::eval(clique_gadget(3, theta, graph("a b\nb c\nc a\n")), theta));
  CHECK_FALSE(oracle::eval(clique_gadget(3, theta, graph("a b\nb c\n")), theta));
  CHECK(oracle::eval(clique_gadget(3, theta, graph("a b\na c\na d\nb c\nb d\nc d\n")), theta));
  CHECK_THROWS_AS(clique_gadget(4, theta, graph("a b\n")), PreconditionError);
}

TEST_CASE("clique gadget agrees with brute force") {
  Formula theta = p("exists x1 x2 x3 x4. (F1(x1,x2) & F2(x1,x3) & F3(x2,x3) & F4(x1,x4) & F5(x2,x4) & F6(x3,x4))");
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Graph g = random_graph(rng, 6, 0.6);
    for (std::size_t k : {2u, 3u, 4u}) {
      bool expected = oracle::has_clique(g, k);
      CHECK(has_clique(g, k) == expected);
      CHECK(oracle::eval(clique_gadget(k, theta, g), theta) == expected);
    }
  }
}
