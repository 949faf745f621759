#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "folio/hypergraph.hpp"
#include "folio/logic.hpp"
#include "folio/structure_io.hpp"
#include "folio/thickness.hpp"

namespace folio {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240229;

struct FormulaShape {
  std::size_t max_variables = 5;
  std::size_t max_atoms = 4;
  bool allow_negation = true;
  bool sentence = true;
};

// Signature P/1, Q/1, E/2, F/2 over the single sort "U".
Signature random_signature();

// Random formula over random_signature() with variables x1..x<max_variables>.
// Sentences close their free variables with random quantifiers.
Formula random_formula(Rng& rng, const FormulaShape& shape = {});

// Every universe gets between 1 and max_size elements; tuples are kept with
// probability `density`.
Structure random_structure(Rng& rng, const Signature& sig, std::size_t max_size, double density = 0.5);

Graph random_graph(Rng& rng, std::size_t n, double p);
Hypergraph random_hypergraph(Rng& rng, std::size_t vertices, std::size_t edges, std::size_t max_edge);

// forall y1 .. yk exists x (E1(y1,x) & ... & Ek(yk,x))
Formula f_k(std::size_t k);

// Random block exists/forall V (phi_1 op ... op phi_n) with some free variables,
// together with a random elimination ordering listing the free variables first.
std::pair<Block, EliminationOrdering> random_block(Rng& rng);

}  // namespace folio
