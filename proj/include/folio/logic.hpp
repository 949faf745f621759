#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "folio/error.hpp"

namespace folio {

inline constexpr const char* kDefaultSort = "U";

using SortWord = std::vector<std::string>;

// Relation symbols with sorted arities over a finite sort set.
class Signature {
 public:
  Signature() = default;

  void add_sort(const std::string& sort);
  // Adds the sorts of `arity` implicitly. Redeclaring with a different arity throws.
  void add_relation(const std::string& name, SortWord arity);

  bool has_sort(const std::string& sort) const { return sorts_.count(sort) != 0; }
  bool has_relation(const std::string& name) const { return relations_.count(name) != 0; }
  const SortWord& arity(const std::string& name) const;

  const std::set<std::string>& sorts() const { return sorts_; }
  const std::map<std::string, SortWord>& relations() const { return relations_; }

  bool operator==(const Signature&) const = default;

 private:
  std::set<std::string> sorts_;
  std::map<std::string, SortWord> relations_;
};

struct Variable {
  std::string name;
  std::string sort = kDefaultSort;

  auto operator<=>(const Variable&) const = default;
};

using VarSet = std::set<Variable>;

enum class Quantifier { Exists, Forall };

inline Quantifier dual(Quantifier q) {
  return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

// Immutable first-order formula. Copies share structure.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or, Quant };

  static Formula atom(std::string relation, std::vector<Variable> args);
  static Formula negation(Formula child);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula binary(Kind kind, Formula left, Formula right);
  // `vars` must be nonempty and free of duplicates.
  static Formula quantified(Quantifier q, std::vector<Variable> vars, Formula body);

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_literal() const;  // atom or negated atom
  bool is_binary() const { return kind() == Kind::And || kind() == Kind::Or; }

  const std::string& relation() const;
  std::span<const Variable> args() const;
  const Formula& child() const;  // Not, Quant
  const Formula& left() const;
  const Formula& right() const;
  Quantifier quantifier() const;
  std::span<const Variable> bound() const;

  std::size_t child_count() const;
  const Formula& child_at(std::size_t i) const;

  // Structural equality.
  bool operator==(const Formula& other) const;

 private:
  struct Node {
    Kind kind;
    std::string relation;
    std::vector<Variable> vars;  // atom arguments or quantified block
    Quantifier quantifier = Quantifier::Exists;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Left-associated n-ary combinations; inputs must be nonempty.
Formula conjoin(std::span<const Formula> parts);
Formula disjoin(std::span<const Formula> parts);
Formula combine(Formula::Kind kind, std::span<const Formula> parts);

// Leaves of the maximal `kind`-tree rooted at f (f itself when it is not of that kind).
std::vector<Formula> flatten(const Formula& f, Formula::Kind kind);

// Expands blocks into nested single-variable quantifiers.
Formula expand_blocks(const Formula& f);

VarSet free_vars(const Formula& f);
// Every variable occurring free or bound.
VarSet all_vars(const Formula& f);
std::size_t width(const Formula& f);
std::size_t node_count(const Formula& f);
std::size_t atom_count(const Formula& f);

bool is_variable_loose(const Formula& f);
bool is_symbol_loose(const Formula& f);
bool is_loose(const Formula& f);
bool is_positive(const Formula& f);
bool is_sentence(const Formula& f);

// Signature read off the atoms of f; conflicting arities throw SignatureError.
Signature infer_signature(const Formula& f);
// Throws SignatureError when an atom disagrees with sig.
void check_against(const Formula& f, const Signature& sig);

// Child-index path from the root; Not and Quant have child 0, binary nodes 0/1.
using Path = std::vector<std::size_t>;

const Formula& subformula_at(const Formula& f, const Path& path);
Formula replace_at(const Formula& f, const Path& path, const Formula& replacement);
std::string path_to_string(const Path& path);

Formula rename_free(const Formula& f, const std::map<Variable, Variable>& renaming);

std::string print_formula(const Formula& f);

using Element = std::string;
using Tuple = std::vector<Element>;

// Finite multi-sorted structure. Universes and relations are kept sorted.
class Structure {
 public:
  Structure() = default;
  explicit Structure(Signature signature);

  const Signature& signature() const { return signature_; }

  void set_universe(const std::string& sort, std::vector<Element> elements);
  // Declares the relation in the signature when absent.
  void set_relation(const std::string& name, std::set<Tuple> tuples);
  void declare_relation(const std::string& name, SortWord arity);
  void add_tuple(const std::string& name, Tuple tuple);

  const std::vector<Element>& universe(const std::string& sort) const;
  const std::map<std::string, std::vector<Element>>& universes() const { return universes_; }
  const std::set<Tuple>& relation(const std::string& name) const;
  const std::map<std::string, std::set<Tuple>>& relations() const { return relations_; }

  bool contains(const std::string& sort, const Element& e) const;
  // Product of the universes along the relation's arity.
  std::set<Tuple> full_relation(const std::string& name) const;
  std::size_t max_universe_size() const;

  // Throws SignatureError when an invariant is violated.
  void validate() const;

  bool operator==(const Structure&) const = default;

 private:
  Signature signature_;
  std::map<std::string, std::vector<Element>> universes_;
  std::map<std::string, std::set<Tuple>> relations_;
};

using Assignment = std::map<Variable, Element>;

// Tarskian semantics by exhaustive recursion. This is the oracle every other
// evaluator is checked against; it memoizes nothing.
bool naive_eval(const Structure& s, const Formula& f, const Assignment& assignment = {});

}  // namespace folio
