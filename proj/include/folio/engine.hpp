#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include <json.hpp>

#include "folio/logic.hpp"
#include "folio/thickness.hpp"

namespace folio {

// Satisfying assignments over an ordered schema of distinct variables.
struct RelationTable {
  std::vector<Variable> schema;
  std::set<Tuple> rows;

  // For 0-ary tables: the single empty row means true.
  bool truth() const { return !rows.empty(); }
};

struct EvalStats {
  std::size_t max_table_rows = 0;
  std::size_t node_count = 0;
  double wall_ms = 0;
};

nlohmann::json to_json(const EvalStats& s);

RelationTable full_product_table(const Structure& s, const std::vector<Variable>& schema);

// Bottom-up relational evaluation; the schema is free_vars(f) in sorted order.
RelationTable bounded_var_eval(const Structure& s, const Formula& f, EvalStats* stats = nullptr);

struct FptResult {
  bool value = false;
  AnalysisReport report;
  EvalStats stats;
  // Set when a bound sort has an empty universe and the rewrite was skipped.
  bool fallback = false;
};

// thickness, then minimize_variables, then bounded_var_eval. f must be a sentence.
FptResult fpt_model_check(const Structure& s, const Formula& f, std::size_t tw_limit = kDefaultTreewidthLimit);

}  // namespace folio
