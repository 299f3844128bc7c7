#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qmt/ast.hpp"
#include "qmt/signature.hpp"
#include "qmt/value.hpp"

namespace qmt {

struct ConceptFact {
  ConceptName concept_name;
  Value member;
};

struct RelationFact {
  RelationName relation;
  Value source;
  Value target;
};

struct FactSet {
  std::vector<ConceptFact> concepts;
  std::vector<RelationFact> relations;
};

// Per-base-type membership predicates. Used to validate facts at index build
// time and to interpret literals during evaluation; a missing entry accepts
// every value.
using BaseTypeTests = std::map<BaseTypeName, std::function<bool(const Value&)>>;

// Hash-set style extents per concept name.
class ConceptIndex {
 public:
  void add(const ConceptName& name, Value member);
  const ValueSet& extent(const ConceptName& name) const;  // empty when absent
  std::vector<ConceptName> names() const;

 private:
  std::map<ConceptName, ValueSet> extents_;
};

// Bidirectional adjacency per atomic relation: forward and backward neighbor
// sets per node, so images of inverses cost the same as forward images.
class RelationIndex {
 public:
  void add(const RelationName& name, const Value& source, const Value& target);
  const ValueSet& forward(const RelationName& name, const Value& source) const;
  const ValueSet& backward(const RelationName& name, const Value& target) const;

  // All pairs of one relation in deterministic order; used by serialization.
  std::vector<std::pair<Value, Value>> pairs(const RelationName& name) const;
  std::vector<RelationName> names() const;

 private:
  struct Adjacency {
    std::map<Value, ValueSet> fwd;
    std::map<Value, ValueSet> bwd;
  };
  std::map<RelationName, Adjacency> adjacency_;
};

struct Index {
  ConceptIndex concepts;
  RelationIndex relations;
};

// Builds both indices, validating facts against the signature: concept and
// relation names must be declared and values must satisfy the base type
// tests. Throws TypeError on ill-sorted facts.
Index build_index(const Signature& sig, const FactSet& facts, const BaseTypeTests& tests = {});

// Evaluation-scoped cache of computed images, keyed by relation node
// identity, direction, and source value.
using ImageMemo = std::map<std::tuple<const void*, bool, std::string>, ValueSet>;

// Set of values reachable from source under the relation expression. The
// computation is compositional: inverses flip direction, closures run a
// breadth-first search over single steps, compositions chain images, and the
// set operators combine images pointwise. Transitive closure is strict
// (at least one step), so reflexivity only appears via explicit facts or
// cycles.
ValueSet image(const Index& index, const RelExpr& rel, const Value& source,
               ImageMemo* memo = nullptr);

}  // namespace qmt
