#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "folio/logic.hpp"

namespace folio {

// Delimiter reserved for composite elements built by the gadget constructions.
inline constexpr char kCompositeDelimiter = '|';

// Structure JSON:
//   { "sorts": [...],
//     "universes": { sort: [elem, ...] },
//     "relations": { name: { "arity": [sort, ...], "tuples": [[elem, ...], ...] } } }
// Shorthands accepted on input: a relation given directly as a tuple list
// (arity defaults to "U"^n), numbers as elements, and omitted universes
// (filled with the elements occurring in the relations). An empty shorthand
// relation takes its arity from `hint`.
Structure structure_from_json(const nlohmann::json& j, const Signature* hint = nullptr);
nlohmann::json structure_to_json(const Structure& s);

Structure load_structure_json(const std::filesystem::path& path, const Signature* hint = nullptr);

// One CSV file per relation: the file stem names the relation, the header row
// lists the sort of each column, every further row is one tuple. Universes are
// the elements occurring in some column of that sort.
Structure load_structure_csv(const std::vector<std::filesystem::path>& paths);

std::string read_file(const std::filesystem::path& path);

// Undirected graph as edge-list text, one "u v" pair per line. A line holding
// a single token declares an isolated vertex. '#' starts a comment.
struct Graph {
  std::vector<std::string> vertices;                         // sorted, unique
  std::vector<std::pair<std::string, std::string>> edges;    // u < v, sorted, unique
};

Graph parse_edge_list(const std::string& text);

}  // namespace folio
