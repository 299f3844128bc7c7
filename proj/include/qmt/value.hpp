#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmt/object.hpp"

namespace qmt {

class ValueSet;

// Immutable semantic value: a URI, an object, an XML fragment, a flat tuple
// of at least two element values, or a set of element values. Tuples never
// nest (construction splices tuple components) and sets never nest, matching
// the type grammar where products range over base types and sets are the
// only collection layer.
class Value {
 public:
  enum class Kind { Uri, Obj, Xml, Tuple, Set };

  static Value uri(std::string text);
  static Value object(Object obj);
  static Value xml(std::string element_text);
  // Splices nested tuple components; a single component collapses to itself.
  static Value tuple(std::vector<Value> components);
  static Value set(ValueSet members);

  Kind kind() const;
  bool is_element() const { return kind() != Kind::Set; }

  const std::string& uri_text() const;
  const Object& obj() const;
  const std::string& xml_text() const;
  std::span<const Value> components() const;
  const ValueSet& members() const;

  // Canonical form: equal keys mean equal values (objects up to alpha).
  const std::string& key() const;

  bool operator==(const Value& other) const { return key() == other.key(); }
  bool operator<(const Value& other) const { return key() < other.key(); }

 private:
  struct Node;
  explicit Value(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Deduplicated, canonically ordered collection of element values. Membership
// and ordering use the canonical key, so alpha-equivalent objects coincide.
// Iteration order is the key order, which makes every consumer deterministic.
class ValueSet {
 public:
  ValueSet() = default;

  // Rejects nested sets; set values only ever contain element values.
  void insert(Value value);
  bool contains(const Value& value) const;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  class const_iterator {
   public:
    using inner = std::vector<std::pair<std::string, Value>>::const_iterator;
    explicit const_iterator(inner it) : it_(it) {}
    const Value& operator*() const { return it_->second; }
    const Value* operator->() const { return &it_->second; }
    const_iterator& operator++() { ++it_; return *this; }
    bool operator==(const const_iterator&) const = default;

   private:
    inner it_;
  };

  const_iterator begin() const { return const_iterator(items_.begin()); }
  const_iterator end() const { return const_iterator(items_.end()); }

  bool operator==(const ValueSet& other) const;

 private:
  friend ValueSet set_union(const ValueSet&, const ValueSet&);
  friend ValueSet set_intersect(const ValueSet&, const ValueSet&);
  friend ValueSet set_diff(const ValueSet&, const ValueSet&);
  std::vector<std::pair<std::string, Value>> items_;  // sorted by key
};

ValueSet set_union(const ValueSet& a, const ValueSet& b);
ValueSet set_intersect(const ValueSet& a, const ValueSet& b);
ValueSet set_diff(const ValueSet& a, const ValueSet& b);

// Deterministic display form used by diagnostics and the text result format.
std::string to_text(const Value& value);

}  // namespace qmt
