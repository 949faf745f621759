#include "indexed_structure.hpp"

namespace folio::detail {

IndexedRelation::IndexedRelation(std::vector<std::size_t> dims, std::vector<IdTuple> tuples)
    : dims_(std::move(dims)), tuples_(std::move(tuples)) {
  std::size_t product = 1;
  bool overflow = false;
  for (std::size_t d : dims_) {
    if (d != 0 && product > kDenseLimit / d) {
      overflow = true;
      break;
    }
    product *= d;
  }
  dense_ = !overflow && product <= kDenseLimit;
  if (dense_) {
    bits_.assign(product, false);
    for (const auto& t : tuples_) {
      std::size_t key = 0;
      for (std::size_t i = 0; i < t.size(); ++i) key = key * dims_[i] + t[i];
      bits_[key] = true;
    }
  } else {
    set_.insert(tuples_.begin(), tuples_.end());
  }
}

bool IndexedRelation::contains(const Id* values) const {
  if (dense_) {
    std::size_t key = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) key = key * dims_[i] + values[i];
    return bits_[key];
  }
  return set_.count(IdTuple(values, values + dims_.size())) != 0;
}

IndexedStructure::IndexedStructure(const Structure& s) : source_(&s) {
  for (const auto& sort : s.signature().sorts()) {
    IndexedSort& entry = sorts_[sort];
    entry.elements = s.universe(sort);
    for (Id i = 0; i < entry.elements.size(); ++i) entry.index.emplace(entry.elements[i], i);
  }
  for (const auto& [name, arity] : s.signature().relations()) {
    std::vector<std::size_t> dims;
    dims.reserve(arity.size());
    for (const auto& sort : arity) dims.push_back(sorts_.at(sort).elements.size());
    std::vector<IdTuple> tuples;
    for (const auto& t : s.relation(name)) {
      IdTuple ids(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) ids[i] = sorts_.at(arity[i]).index.at(t[i]);
      tuples.push_back(std::move(ids));
    }
    relations_.emplace(name, IndexedRelation(std::move(dims), std::move(tuples)));
  }
}

const IndexedSort& IndexedStructure::sort(const std::string& name) const {
  auto it = sorts_.find(name);
  if (it == sorts_.end()) throw SignatureError("structure has no sort '" + name + "'");
  return it->second;
}

const IndexedRelation& IndexedStructure::relation(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw SignatureError("structure does not interpret '" + name + "'");
  return it->second;
}

Id IndexedStructure::id_of(const std::string& sort_name, const Element& e) const {
  const auto& s = sort(sort_name);
  auto it = s.index.find(e);
  if (it == s.index.end())
    throw EvalError("element '" + e + "' is not in the universe of sort '" + sort_name + "'");
  return it->second;
}

}  // namespace folio::detail
