#include "folio/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "indexed_structure.hpp"

namespace folio {

nlohmann::json to_json(const EvalStats& s) {
  return {{"max_table_rows", s.max_table_rows}, {"node_count", s.node_count}, {"wall_ms", s.wall_ms}};
}

namespace {

using detail::Id;
using detail::IdTuple;
using detail::IdTupleHash;
using K = Formula::Kind;

struct Table {
  std::vector<Variable> schema;  // sorted
  std::vector<IdTuple> rows;     // sorted, unique
};

void normalize_rows(std::vector<IdTuple>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

std::size_t position(const std::vector<Variable>& schema, const Variable& v) {
  return static_cast<std::size_t>(std::lower_bound(schema.begin(), schema.end(), v) - schema.begin());
}

class Evaluator {
 public:
  Evaluator(const detail::IndexedStructure& s, EvalStats* stats) : s_(s), stats_(stats) {}

  Table eval(const Formula& f) {
    Table t = eval_node(f);
    if (stats_) {
      ++stats_->node_count;
      stats_->max_table_rows = std::max(stats_->max_table_rows, t.rows.size());
    }
    return t;
  }

  Table full(const std::vector<Variable>& schema) const {
    Table t{schema, {}};
    std::vector<std::size_t> sizes;
    for (const auto& v : schema) {
      sizes.push_back(s_.universe_size(v.sort));
      if (sizes.back() == 0) return t;
    }
    IdTuple row(schema.size(), 0);
    while (true) {
      t.rows.push_back(row);
      std::size_t i = schema.size();
      while (i > 0) {
        --i;
        if (++row[i] < sizes[i]) break;
        row[i] = 0;
        if (i == 0) return t;
      }
      if (schema.empty()) return t;
    }
  }

 private:
  Table eval_node(const Formula& f) {
    switch (f.kind()) {
      case K::Atom:
        return atom(f);
      case K::Not:
        return complement(eval(f.child()));
      case K::And:
        return join(eval(f.left()), eval(f.right()));
      case K::Or:
        return unite(eval(f.left()), eval(f.right()));
      case K::Quant: {
        Table body = eval(f.child());
        if (f.quantifier() == Quantifier::Exists) return exists(body, f.bound());
        return complement(exists(complement(body), f.bound()));
      }
    }
    return {};
  }

  Table atom(const Formula& f) {
    const SortWord& arity = s_.source().signature().arity(f.relation());
    if (arity.size() != f.args().size()) throw SignatureError("arity mismatch for relation '" + f.relation() + "'");
    for (std::size_t i = 0; i < arity.size(); ++i)
      if (arity[i] != f.args()[i].sort)
        throw SignatureError("sort mismatch in argument " + std::to_string(i + 1) + " of '" + f.relation() + "'");
    Table t;
    t.schema.assign(f.args().begin(), f.args().end());
    normalize_vars(t.schema);
    std::vector<std::size_t> target;
    for (const auto& v : f.args()) target.push_back(position(t.schema, v));
    IdTuple row(t.schema.size());
    std::vector<bool> set(t.schema.size());
    for (const auto& tuple : s_.relation(f.relation()).tuples()) {
      std::fill(set.begin(), set.end(), false);
      bool ok = true;
      for (std::size_t i = 0; i < tuple.size() && ok; ++i) {
        std::size_t p = target[i];
        if (set[p] && row[p] != tuple[i]) ok = false;
        row[p] = tuple[i];
        set[p] = true;
      }
      if (ok) t.rows.push_back(row);
    }
    normalize_rows(t.rows);
    return t;
  }

  static void normalize_vars(std::vector<Variable>& vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  }

  Table complement(const Table& t) const {
    Table all = full(t.schema);
    Table out{t.schema, {}};
    std::set_difference(all.rows.begin(), all.rows.end(), t.rows.begin(), t.rows.end(), std::back_inserter(out.rows));
    return out;
  }

  Table join(const Table& a, const Table& b) const {
    Table out;
    std::set_union(a.schema.begin(), a.schema.end(), b.schema.begin(), b.schema.end(), std::back_inserter(out.schema));
    std::vector<Variable> common;
    std::set_intersection(a.schema.begin(), a.schema.end(), b.schema.begin(), b.schema.end(),
                          std::back_inserter(common));
    std::vector<std::size_t> ka, kb;
    for (const auto& v : common) {
      ka.push_back(position(a.schema, v));
      kb.push_back(position(b.schema, v));
    }
    // Output position of each input column.
    std::vector<std::size_t> pa, pb;
    for (const auto& v : a.schema) pa.push_back(position(out.schema, v));
    for (const auto& v : b.schema) pb.push_back(position(out.schema, v));

    std::unordered_map<IdTuple, std::vector<std::size_t>, IdTupleHash> index;
    IdTuple key(common.size());
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      for (std::size_t i = 0; i < kb.size(); ++i) key[i] = b.rows[r][kb[i]];
      index[key].push_back(r);
    }
    IdTuple row(out.schema.size());
    for (const auto& ra : a.rows) {
      for (std::size_t i = 0; i < ka.size(); ++i) key[i] = ra[ka[i]];
      auto it = index.find(key);
      if (it == index.end()) continue;
      for (std::size_t i = 0; i < ra.size(); ++i) row[pa[i]] = ra[i];
      for (std::size_t r : it->second) {
        const IdTuple& rb = b.rows[r];
        for (std::size_t i = 0; i < rb.size(); ++i) row[pb[i]] = rb[i];
        out.rows.push_back(row);
      }
    }
    normalize_rows(out.rows);
    return out;
  }

  // Cylinder of t over `schema`, a superset of t.schema.
  Table extend(const Table& t, const std::vector<Variable>& schema) const {
    if (t.schema == schema) return t;
    std::vector<Variable> missing;
    std::set_difference(schema.begin(), schema.end(), t.schema.begin(), t.schema.end(), std::back_inserter(missing));
    return join(t, full(missing));
  }

  Table unite(const Table& a, const Table& b) const {
    std::vector<Variable> schema;
    std::set_union(a.schema.begin(), a.schema.end(), b.schema.begin(), b.schema.end(), std::back_inserter(schema));
    Table ea = extend(a, schema);
    Table eb = extend(b, schema);
    Table out{schema, {}};
    std::set_union(ea.rows.begin(), ea.rows.end(), eb.rows.begin(), eb.rows.end(), std::back_inserter(out.rows));
    return out;
  }

  Table exists(const Table& t, std::span<const Variable> vars) const {
    Table out;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < t.schema.size(); ++i) {
      if (std::find(vars.begin(), vars.end(), t.schema[i]) == vars.end()) {
        out.schema.push_back(t.schema[i]);
        keep.push_back(i);
      }
    }
    for (const auto& v : vars)
      if (s_.universe_size(v.sort) == 0) return out;
    out.rows.reserve(t.rows.size());
    IdTuple row(keep.size());
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < keep.size(); ++i) row[i] = r[keep[i]];
      out.rows.push_back(row);
    }
    normalize_rows(out.rows);
    return out;
  }

  const detail::IndexedStructure& s_;
  EvalStats* stats_;
};

RelationTable to_relation_table(const detail::IndexedStructure& s, const Table& t) {
  RelationTable out{t.schema, {}};
  for (const auto& row : t.rows) {
    Tuple tuple;
    for (std::size_t i = 0; i < row.size(); ++i) tuple.push_back(s.sort(t.schema[i].sort).elements[row[i]]);
    out.rows.insert(std::move(tuple));
  }
  return out;
}

}  // namespace

RelationTable full_product_table(const Structure& s, const std::vector<Variable>& schema) {
  std::vector<Variable> sorted = schema;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("schema variables must be distinct");
  RelationTable out{schema, {}};
  std::vector<const std::vector<Element>*> universes;
  for (const auto& v : schema) {
    universes.push_back(&s.universe(v.sort));
    if (universes.back()->empty()) return out;
  }
  std::vector<std::size_t> idx(schema.size(), 0);
  while (true) {
    Tuple t;
    for (std::size_t i = 0; i < idx.size(); ++i) t.push_back((*universes[i])[idx[i]]);
    out.rows.insert(std::move(t));
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < universes[i]->size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return out;
  }
}

RelationTable bounded_var_eval(const Structure& s, const Formula& f, EvalStats* stats) {
  auto start = std::chrono::steady_clock::now();
  detail::IndexedStructure indexed(s);
  Evaluator ev(indexed, stats);
  Table t = ev.eval(f);
  RelationTable out = to_relation_table(indexed, t);
  if (stats) stats->wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

FptResult fpt_model_check(const Structure& s, const Formula& f, std::size_t tw_limit) {
  if (!is_sentence(f)) throw PreconditionError("fpt_model_check requires a sentence");
  auto start = std::chrono::steady_clock::now();
  FptResult r;
  bool empty_bound_sort = false;
  for (const auto& v : all_vars(f))
    if (s.universe(v.sort).empty()) empty_bound_sort = true;
  Formula target = f;
  if (empty_bound_sort) {
    r.fallback = true;
  } else {
    r.report = analyze(f, tw_limit);
    target = minimize_variables(f, tw_limit);
  }
  r.value = bounded_var_eval(s, target, &r.stats).truth();
  if (!r.fallback) {
    // Tables never hold more than M^thick rows, M the largest universe.
    const double cap = std::pow(static_cast<double>(s.max_universe_size()), static_cast<double>(r.report.thickness));
    if (static_cast<double>(r.stats.max_table_rows) > std::max(cap, 1.0))
      throw Error("internal: table of " + std::to_string(r.stats.max_table_rows) + " rows exceeds M^thick");
  }
  r.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace folio
