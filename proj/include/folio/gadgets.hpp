#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "folio/logic.hpp"
#include "folio/structure_io.hpp"

namespace folio {

// Q X (a_1 op ... op a_n) with every a_i an atom; op = & for exists, | for forall.
struct SimpleSubformula {
  Path path;
  Quantifier quantifier = Quantifier::Exists;
  std::vector<Variable> bound;
  VarSet free;
};

bool is_simple(const Formula& f);
// Pre-order list of the simple subformulas of f.
std::vector<SimpleSubformula> simple_subformulas(const Formula& f);

inline constexpr const char* kFreshPrefix = "__acc_";
// Element used for sorts that need a universe but have none yet.
inline constexpr const char* kFillerElement = "_";

// Adds full or empty relations for every symbol of phi outside the subformula
// at `path`, so that the result satisfies phi iff `base` satisfies that
// subformula. The path may pass through & and | only; phi must be symbol-loose.
Structure fill_trivial_relations(const Formula& phi, const Path& path, const Structure& base);

// Drops the negations of phi (negations only above atoms, each symbol once)
// and complements the relations that were negated.
std::pair<Formula, Structure> complement_structure(const Formula& phi, const Structure& s);

// Gives every variable its own sort named after it.
Formula full_sort(const Formula& psi);

// One-sorted structure over psi's signature from a structure over full(psi)'s.
Structure collapse_sorts(const Formula& psi, const Structure& s);

// Replaces the simple subformula at `path` with the disjunction (for exists)
// or conjunction (for forall) of fresh binary atoms over all pairs of its free
// variables. The fresh symbols are __acc_1, __acc_2, ...
Formula make_accordion_pair(const Formula& phi, const Path& path);

// Sentence based on the simple subformula at `path`: each atom keeps only its
// quantified variables and is renamed to __acc_base_<symbol>.
Formula based_sentence(const Formula& phi, const Path& path);

enum class AccordionCase { Based = 1, Disjunction = 2, Conjunction = 3 };

struct AccordionResult {
  Structure structure;
  AccordionCase which = AccordionCase::Disjunction;
  Path path;                  // of the simple subformula in phi
  std::size_t measure_in = 0;  // max universe size of the input structure
  std::size_t measure_out = 0;
  std::size_t measure_bound = 0;
};

// Structure B over phi's signature with A |= psi iff B |= phi, for (psi, phi)
// related by one of the three accordion cases.
AccordionResult accordion_step(const Formula& psi, const Formula& phi, const Structure& a);

struct CliqueWitness {
  Path path;                    // of the simple existential subformula
  std::vector<Variable> vars;   // a maximum clique of the coverage graph
  std::vector<Variable> chosen;  // the first k of vars
  std::vector<std::size_t> atoms;  // member indices with two or more chosen variables
};

std::optional<CliqueWitness> find_existential_clique(const Formula& theta, std::size_t k);

// Structure that satisfies theta iff g has a k-clique. theta must be symbol-loose.
Structure clique_gadget(std::size_t k, const Formula& theta, const Graph& g);

// Brute-force k-clique test used to validate the gadget.
bool has_clique(const Graph& g, std::size_t k);

}  // namespace folio
