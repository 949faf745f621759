#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "folio/hypergraph.hpp"
#include "folio/logic.hpp"

namespace folio {

// Quantifier block Q V (phi_1 op ... op phi_n), op = & for exists and | for forall.
// An empty V denotes the bare combination of the children.
struct Block {
  Quantifier quantifier = Quantifier::Exists;
  std::vector<Variable> vars;
  std::vector<Formula> children;

  // Flattens f's body along the block's connective. f must be a quantifier node.
  static Block from(const Formula& f);
  Formula to_formula() const;
  VarSet free() const;
};

// Hypergraph {free(phi_i)} + {free(phi)} over variable names.
Hypergraph block_hypergraph(const Block& b);

// 1 + tw({free(phi_i)} + {free(phi)}) for a layered block node.
std::size_t local_thickness(const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);
// 1 + tw({free(phi_i) & V}).
std::size_t quantified_thickness(const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);
std::size_t thickness_layered(const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);
std::size_t thickness(const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);

// Maximal subformulas reachable from the root through & and | only, with their paths.
std::vector<std::pair<Path, Formula>> positively_combined_subformulas(const Formula& f);

// Width where a quantifier and the &/| spine directly below it count as one
// node whose subformulas are the spine's members, as for set quantifiers.
std::size_t block_width(const Formula& f);

// Pulls the last variable of e out of the block. e must list free(b) first and
// cover the block hypergraph; the returned ordering drops that variable.
std::pair<Block, EliminationOrdering> eliminate_last_variable(const Block& b, const EliminationOrdering& e);

// Equivalent formula using at most thickness(f) variable names for sentences
// (at most max(thickness, |free|) otherwise).
Formula minimize_variables(const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);

struct NodeThickness {
  std::size_t local = 0;
  std::size_t quantified = 0;
};

struct AnalysisReport {
  std::size_t thickness = 0;
  std::string layered;  // printed lay(f); per_node paths refer to it
  std::map<std::string, NodeThickness> per_node;
  std::size_t width_before = 0;
  std::size_t width_after = 0;
  std::size_t variables_used_after = 0;
  std::string rewritten;
};

AnalysisReport analyze(const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);
nlohmann::json to_json(const AnalysisReport& r);

}  // namespace folio
