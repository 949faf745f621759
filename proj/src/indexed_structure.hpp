#pragma once

// Integer view of a Structure shared by the evaluators.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "folio/logic.hpp"

namespace folio::detail {

using Id = std::uint32_t;
using IdTuple = std::vector<Id>;

struct IdTupleHash {
  std::size_t operator()(const IdTuple& t) const noexcept {
    std::size_t seed = t.size();
    for (Id v : t) seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
  }
};

struct IndexedSort {
  std::vector<Element> elements;
  std::unordered_map<Element, Id> index;
};

// Membership test for one relation: a dense bitmap when the product of the
// universes is small, a hash set otherwise.
class IndexedRelation {
 public:
  IndexedRelation() = default;
  IndexedRelation(std::vector<std::size_t> dims, std::vector<IdTuple> tuples);

  bool contains(const Id* values) const;
  const std::vector<IdTuple>& tuples() const { return tuples_; }
  std::size_t arity() const { return dims_.size(); }

 private:
  static constexpr std::size_t kDenseLimit = std::size_t{1} << 24;

  std::vector<std::size_t> dims_;
  std::vector<IdTuple> tuples_;
  bool dense_ = false;
  std::vector<bool> bits_;
  std::unordered_set<IdTuple, IdTupleHash> set_;
};

class IndexedStructure {
 public:
  explicit IndexedStructure(const Structure& s);

  const Structure& source() const { return *source_; }
  const IndexedSort& sort(const std::string& name) const;
  std::size_t universe_size(const std::string& name) const { return sort(name).elements.size(); }
  const IndexedRelation& relation(const std::string& name) const;
  Id id_of(const std::string& sort_name, const Element& e) const;

 private:
  const Structure* source_;
  std::map<std::string, IndexedSort> sorts_;
  std::map<std::string, IndexedRelation> relations_;
};

}  // namespace folio::detail
