#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "folio/logic.hpp"

namespace folio {

// One application of a syntactic equivalence.
//   alpha   associativity / commutativity of & and |
//   beta    Ex (A | B) == Ex A | Ex B,   Ay (A & B) == Ay A & Ay B
//   gamma   Ex (A & B) == (Ex A) & B  when x is not free in B (B may be absent)
//   delta   distributivity of & over | and of | over &
//   epsilon De Morgan for connectives and quantifiers
//   replacement  renames the relation symbol of the atom at `path` to `symbol`
enum class Rule { Alpha, Beta, Gamma, Delta, Epsilon, Replacement };

// Forward rewrites the left-hand side of the law into the right-hand side.
// For alpha, Forward/Backward reassociate right/left and Commute swaps operands.
enum class Direction { Forward, Backward, Commute };

struct RewriteStep {
  Rule rule;
  Path path;
  Direction direction = Direction::Forward;
  std::string symbol;  // replacement only

  bool operator==(const RewriteStep&) const = default;
};

std::string rule_name(Rule r);
std::string direction_name(Direction d);
nlohmann::json to_json(const RewriteStep& step);

// Single-step rewrite at step.path. Throws PreconditionError on a pattern mismatch.
Formula apply_transformation(const Formula& f, const RewriteStep& step, const Signature* sig = nullptr);

// Negation normal form: negations only directly above atoms.
Formula nnf(const Formula& f, std::vector<RewriteStep>* trace = nullptr);

// Swaps & with | and exists with forall; atoms and negations are kept.
Formula dual(const Formula& f);

bool is_organized(const Formula& f);

// Positive combination of organized formulas, returned as a DNF. All
// transformations used are equivalences over nonempty universes.
Formula organize(const Formula& f, std::vector<RewriteStep>* trace = nullptr);

bool is_layered(const Formula& f);
bool is_layered(const Formula& f, Quantifier q);  // exists- or forall-layered

// Renames bound variables so that none is quantified twice or both free and
// bound. Fresh names take the form "x$1", "x$2", ... and avoid `reserved`.
Formula make_variable_loose(const Formula& f, const std::set<std::string>& reserved = {});

// Requires is_organized(f). Merges adjacent same-quantifier blocks; members of
// each merged conjunction/disjunction are ordered by their printed form.
Formula layer(const Formula& f);

// Positive combination of layered formulas: layer applied to each leaf of organize.
Formula lay(const Formula& f);

// Occurrence-indexed symbol substitution; occurrences are counted over atoms in
// pre-order from 0. Each new symbol must have the atom's sort word in `target`.
Formula replace_symbols(const Formula& f, const std::map<std::size_t, std::string>& substitution,
                        const Signature& target);

// Every formula obtainable from f by replacement over `target`.
std::vector<Formula> enumerate_replacements(const Formula& f, const Signature& target);

}  // namespace folio
