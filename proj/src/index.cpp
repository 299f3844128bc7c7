#include "qmt/index.hpp"

#include <deque>

#include "qmt/checker.hpp"

namespace qmt {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

const ValueSet& empty_set() {
  static const ValueSet empty;
  return empty;
}

}  // namespace

void ConceptIndex::add(const ConceptName& name, Value member) {
  extents_[name].insert(std::move(member));
}

const ValueSet& ConceptIndex::extent(const ConceptName& name) const {
  auto it = extents_.find(name);
  return it == extents_.end() ? empty_set() : it->second;
}

std::vector<ConceptName> ConceptIndex::names() const {
  std::vector<ConceptName> out;
  out.reserve(extents_.size());
  for (const auto& [name, extent] : extents_) out.push_back(name);
  return out;
}

void RelationIndex::add(const RelationName& name, const Value& source, const Value& target) {
  Adjacency& adj = adjacency_[name];
  adj.fwd[source].insert(target);
  adj.bwd[target].insert(source);
}

const ValueSet& RelationIndex::forward(const RelationName& name, const Value& source) const {
  auto it = adjacency_.find(name);
  if (it == adjacency_.end()) return empty_set();
  auto jt = it->second.fwd.find(source);
  return jt == it->second.fwd.end() ? empty_set() : jt->second;
}

const ValueSet& RelationIndex::backward(const RelationName& name, const Value& target) const {
  auto it = adjacency_.find(name);
  if (it == adjacency_.end()) return empty_set();
  auto jt = it->second.bwd.find(target);
  return jt == it->second.bwd.end() ? empty_set() : jt->second;
}

std::vector<std::pair<Value, Value>> RelationIndex::pairs(const RelationName& name) const {
  std::vector<std::pair<Value, Value>> out;
  auto it = adjacency_.find(name);
  if (it == adjacency_.end()) return out;
  for (const auto& [source, targets] : it->second.fwd) {
    for (const auto& target : targets) {
      out.emplace_back(source, target);
    }
  }
  return out;
}

std::vector<RelationName> RelationIndex::names() const {
  std::vector<RelationName> out;
  out.reserve(adjacency_.size());
  for (const auto& [name, adj] : adjacency_) out.push_back(name);
  return out;
}

namespace {

void check_sort(const BaseTypeTests& tests, const BaseTypeName& base, const Value& value,
                const std::string& where) {
  if (!value.is_element()) {
    throw TypeError(ErrorKind::TypeMismatch, where, "fact values must be elements");
  }
  auto it = tests.find(base);
  if (it != tests.end() && !it->second(value)) {
    throw TypeError(ErrorKind::TypeMismatch, where,
                    to_text(value) + " does not inhabit base type " + base);
  }
}

}  // namespace

Index build_index(const Signature& sig, const FactSet& facts, const BaseTypeTests& tests) {
  Index index;
  for (std::size_t i = 0; i < facts.concepts.size(); ++i) {
    const ConceptFact& fact = facts.concepts[i];
    std::string where = "concepts[" + std::to_string(i) + "]";
    const ConceptDecl* decl = sig.find_concept(fact.concept_name);
    if (!decl) {
      throw TypeError(ErrorKind::UnknownSymbol, where,
                      "concept " + fact.concept_name + " is not declared");
    }
    check_sort(tests, decl->member_type, fact.member, where);
    index.concepts.add(fact.concept_name, fact.member);
  }
  for (std::size_t i = 0; i < facts.relations.size(); ++i) {
    const RelationFact& fact = facts.relations[i];
    std::string where = "relations[" + std::to_string(i) + "]";
    const RelationDecl* decl = sig.find_relation(fact.relation);
    if (!decl) {
      throw TypeError(ErrorKind::UnknownSymbol, where,
                      "relation " + fact.relation + " is not declared");
    }
    check_sort(tests, decl->source, fact.source, where);
    check_sort(tests, decl->target, fact.target, where);
    index.relations.add(fact.relation, fact.source, fact.target);
  }
  return index;
}

namespace {

// Forward images follow the expression as written; inverted images compute
// the image under the inverse by pushing the inversion inwards, which keeps
// every step a constant-time adjacency lookup:
//   (inv R) flips direction, (R ; S) reverses into inv S ; inv R,
//   closures and the pointwise operators commute with inversion.
ValueSet image_rec(const Index& index, const RelExpr& rel, const Value& source, bool inverted,
                   ImageMemo* memo) {
  if (memo) {
    auto key = std::make_tuple(rel.id(), inverted, source.key());
    auto it = memo->find(key);
    if (it != memo->end()) return it->second;
  }
  ValueSet out = std::visit(
      overloaded{
          [&](const RelAtom& x) {
            return inverted ? index.relations.backward(x.name, source)
                            : index.relations.forward(x.name, source);
          },
          [&](const RelInverse& x) {
            return image_rec(index, x.sub, source, !inverted, memo);
          },
          [&](const RelClosure& x) {
            // Strict closure: breadth-first search seeded with one step.
            ValueSet reached;
            std::deque<Value> frontier;
            for (const auto& v : image_rec(index, x.sub, source, inverted, memo)) {
              reached.insert(v);
              frontier.push_back(v);
            }
            while (!frontier.empty()) {
              Value current = frontier.front();
              frontier.pop_front();
              for (const auto& v : image_rec(index, x.sub, current, inverted, memo)) {
                if (!reached.contains(v)) {
                  reached.insert(v);
                  frontier.push_back(v);
                }
              }
            }
            return reached;
          },
          [&](const RelCompose& x) {
            const RelExpr& first = inverted ? x.right : x.left;
            const RelExpr& second = inverted ? x.left : x.right;
            ValueSet mid = image_rec(index, first, source, inverted, memo);
            ValueSet out2;
            for (const auto& v : mid) {
              out2 = set_union(out2, image_rec(index, second, v, inverted, memo));
            }
            return out2;
          },
          [&](const RelUnion& x) {
            return set_union(image_rec(index, x.left, source, inverted, memo),
                             image_rec(index, x.right, source, inverted, memo));
          },
          [&](const RelIntersect& x) {
            return set_intersect(image_rec(index, x.left, source, inverted, memo),
                                 image_rec(index, x.right, source, inverted, memo));
          },
          [&](const RelDiff& x) {
            return set_diff(image_rec(index, x.left, source, inverted, memo),
                            image_rec(index, x.right, source, inverted, memo));
          },
      },
      rel.node());
  if (memo) {
    (*memo)[std::make_tuple(rel.id(), inverted, source.key())] = out;
  }
  return out;
}

}  // namespace

ValueSet image(const Index& index, const RelExpr& rel, const Value& source, ImageMemo* memo) {
  return image_rec(index, rel, source, false, memo);
}

}  // namespace qmt
