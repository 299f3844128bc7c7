#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qmt/value.hpp"

namespace qmt {

// Names live in one flat signature namespace; the aliases only document the
// intended role at each use site.
using BaseTypeName = std::string;
using ConceptName = std::string;
using RelationName = std::string;
using FunName = std::string;
using PredName = std::string;
using VarName = std::string;

// Product of base types. A one-component product is identified with the base
// type itself; components never nest.
struct SimpleType {
  std::vector<BaseTypeName> components;

  static SimpleType base(BaseTypeName name) { return SimpleType{{std::move(name)}}; }
  bool is_base() const { return components.size() == 1; }
  std::size_t arity() const { return components.size(); }

  bool operator==(const SimpleType&) const = default;
};

// Either an element type or a set of elements; sets never nest.
struct GeneralType {
  SimpleType element;
  bool set = false;

  static GeneralType elem(SimpleType t) { return GeneralType{std::move(t), false}; }
  static GeneralType set_of(SimpleType t) { return GeneralType{std::move(t), true}; }

  bool operator==(const GeneralType&) const = default;
};

std::string to_text(const SimpleType& type);
std::string to_text(const GeneralType& type);

// Ordered typing context. Binders may shadow earlier entries; lookup returns
// the rightmost binding.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<std::pair<VarName, SimpleType>> entries)
      : entries_(std::move(entries)) {}

  Context extended(VarName var, SimpleType type) const {
    Context out = *this;
    out.entries_.emplace_back(std::move(var), std::move(type));
    return out;
  }

  const SimpleType* lookup(const VarName& var) const {
    for (std::size_t i = entries_.size(); i-- > 0;) {
      if (entries_[i].first == var) return &entries_[i].second;
    }
    return nullptr;
  }

  const std::vector<std::pair<VarName, SimpleType>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<VarName, SimpleType>> entries_;
};

struct RelNode;
struct PropNode;
struct QueryNode;

// Relation expression handle: atomic relation names composed with inverse,
// transitive closure, composition, union, intersection, and difference.
class RelExpr {
 public:
  static RelExpr atom(RelationName name);
  static RelExpr inverse(RelExpr sub);
  static RelExpr closure(RelExpr sub);
  static RelExpr compose(RelExpr left, RelExpr right);
  static RelExpr set_union(RelExpr left, RelExpr right);
  static RelExpr intersect(RelExpr left, RelExpr right);
  static RelExpr diff(RelExpr left, RelExpr right);

  const RelNode& node() const { return *node_; }
  // Stable identity of the shared node, used as a memoization key.
  const void* id() const { return node_.get(); }

 private:
  explicit RelExpr(std::shared_ptr<const RelNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const RelNode> node_;
};

// Proposition handle: predicate applications, negation, conjunction, and
// universal quantification relative to a query domain.
class PropExpr {
 public:
  static PropExpr pred(PredName name, std::vector<class QueryExpr> args);
  static PropExpr negate(PropExpr sub);
  static PropExpr conj(PropExpr left, PropExpr right);
  static PropExpr forall_in(VarName var, class QueryExpr domain, PropExpr body);

  const PropNode& node() const { return *node_; }

 private:
  explicit PropExpr(std::shared_ptr<const PropNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const PropNode> node_;
};

// Query expression handle covering the whole expression grammar: concept
// references, variables, function applications, tuples, projections, images
// under relation expressions, indexed unions, comprehensions, and literals
// (arbitrary values used as nullary constants of a declared base type).
class QueryExpr {
 public:
  static QueryExpr concept_ref(ConceptName name);
  static QueryExpr var(VarName name);
  static QueryExpr apply(FunName fun, std::vector<QueryExpr> args);
  static QueryExpr tuple(std::vector<QueryExpr> items);
  static QueryExpr proj(QueryExpr tuple, std::size_t index);  // 1-based
  static QueryExpr rel_image(RelExpr rel, QueryExpr arg);
  static QueryExpr big_union(VarName var, QueryExpr domain, QueryExpr body);
  static QueryExpr comprehension(VarName var, QueryExpr domain, PropExpr filter);
  static QueryExpr literal(Value value, BaseTypeName base_type);

  const QueryNode& node() const { return *node_; }

 private:
  explicit QueryExpr(std::shared_ptr<const QueryNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const QueryNode> node_;
};

struct RelAtom { RelationName name; };
struct RelInverse { RelExpr sub; };
struct RelClosure { RelExpr sub; };
struct RelCompose { RelExpr left, right; };
struct RelUnion { RelExpr left, right; };
struct RelIntersect { RelExpr left, right; };
struct RelDiff { RelExpr left, right; };

struct RelNode : std::variant<RelAtom, RelInverse, RelClosure, RelCompose,
                              RelUnion, RelIntersect, RelDiff> {
  using variant::variant;
};

struct ConceptRef { ConceptName name; };
struct VarRef { VarName name; };
struct FunApp { FunName fun; std::vector<QueryExpr> args; };
struct TupleExpr { std::vector<QueryExpr> items; };  // at least two items
struct Projection { QueryExpr tuple; std::size_t index; };
struct RelImage { RelExpr rel; QueryExpr arg; };
struct BigUnion { VarName var; QueryExpr domain; QueryExpr body; };
struct Comprehension { VarName var; QueryExpr domain; PropExpr filter; };
struct LiteralExpr { Value value; BaseTypeName base_type; };

struct QueryNode : std::variant<ConceptRef, VarRef, FunApp, TupleExpr, Projection,
                                RelImage, BigUnion, Comprehension, LiteralExpr> {
  using variant::variant;
};

struct PredApp { PredName pred; std::vector<QueryExpr> args; };
struct PropNot { PropExpr sub; };
struct PropAnd { PropExpr left, right; };
struct ForallIn { VarName var; QueryExpr domain; PropExpr body; };

struct PropNode : std::variant<PredApp, PropNot, PropAnd, ForallIn> {
  using variant::variant;
};

inline RelExpr RelExpr::atom(RelationName name) {
  return RelExpr(std::make_shared<RelNode>(RelAtom{std::move(name)}));
}
inline RelExpr RelExpr::inverse(RelExpr sub) {
  return RelExpr(std::make_shared<RelNode>(RelInverse{std::move(sub)}));
}
inline RelExpr RelExpr::closure(RelExpr sub) {
  return RelExpr(std::make_shared<RelNode>(RelClosure{std::move(sub)}));
}
inline RelExpr RelExpr::compose(RelExpr left, RelExpr right) {
  return RelExpr(std::make_shared<RelNode>(RelCompose{std::move(left), std::move(right)}));
}
inline RelExpr RelExpr::set_union(RelExpr left, RelExpr right) {
  return RelExpr(std::make_shared<RelNode>(RelUnion{std::move(left), std::move(right)}));
}
inline RelExpr RelExpr::intersect(RelExpr left, RelExpr right) {
  return RelExpr(std::make_shared<RelNode>(RelIntersect{std::move(left), std::move(right)}));
}
inline RelExpr RelExpr::diff(RelExpr left, RelExpr right) {
  return RelExpr(std::make_shared<RelNode>(RelDiff{std::move(left), std::move(right)}));
}

inline PropExpr PropExpr::pred(PredName name, std::vector<QueryExpr> args) {
  return PropExpr(std::make_shared<PropNode>(PredApp{std::move(name), std::move(args)}));
}
inline PropExpr PropExpr::negate(PropExpr sub) {
  return PropExpr(std::make_shared<PropNode>(PropNot{std::move(sub)}));
}
inline PropExpr PropExpr::conj(PropExpr left, PropExpr right) {
  return PropExpr(std::make_shared<PropNode>(PropAnd{std::move(left), std::move(right)}));
}
inline PropExpr PropExpr::forall_in(VarName var, QueryExpr domain, PropExpr body) {
  return PropExpr(std::make_shared<PropNode>(
      ForallIn{std::move(var), std::move(domain), std::move(body)}));
}

inline QueryExpr QueryExpr::concept_ref(ConceptName name) {
  return QueryExpr(std::make_shared<QueryNode>(ConceptRef{std::move(name)}));
}
inline QueryExpr QueryExpr::var(VarName name) {
  return QueryExpr(std::make_shared<QueryNode>(VarRef{std::move(name)}));
}
inline QueryExpr QueryExpr::apply(FunName fun, std::vector<QueryExpr> args) {
  return QueryExpr(std::make_shared<QueryNode>(FunApp{std::move(fun), std::move(args)}));
}
inline QueryExpr QueryExpr::tuple(std::vector<QueryExpr> items) {
  if (items.size() < 2) {
    throw std::invalid_argument("tuple expression requires at least two items");
  }
  return QueryExpr(std::make_shared<QueryNode>(TupleExpr{std::move(items)}));
}
inline QueryExpr QueryExpr::proj(QueryExpr tuple, std::size_t index) {
  return QueryExpr(std::make_shared<QueryNode>(Projection{std::move(tuple), index}));
}
inline QueryExpr QueryExpr::rel_image(RelExpr rel, QueryExpr arg) {
  return QueryExpr(std::make_shared<QueryNode>(RelImage{std::move(rel), std::move(arg)}));
}
inline QueryExpr QueryExpr::big_union(VarName var, QueryExpr domain, QueryExpr body) {
  return QueryExpr(std::make_shared<QueryNode>(
      BigUnion{std::move(var), std::move(domain), std::move(body)}));
}
inline QueryExpr QueryExpr::comprehension(VarName var, QueryExpr domain, PropExpr filter) {
  return QueryExpr(std::make_shared<QueryNode>(
      Comprehension{std::move(var), std::move(domain), std::move(filter)}));
}
inline QueryExpr QueryExpr::literal(Value value, BaseTypeName base_type) {
  return QueryExpr(std::make_shared<QueryNode>(
      LiteralExpr{std::move(value), std::move(base_type)}));
}

bool equal(const RelExpr& a, const RelExpr& b);
bool equal(const PropExpr& a, const PropExpr& b);
bool equal(const QueryExpr& a, const QueryExpr& b);

inline bool operator==(const RelExpr& a, const RelExpr& b) { return equal(a, b); }
inline bool operator==(const PropExpr& a, const PropExpr& b) { return equal(a, b); }
inline bool operator==(const QueryExpr& a, const QueryExpr& b) { return equal(a, b); }

// Raised by alpha_rename when the requested renaming would change the binding
// structure, and by substitution helpers on inconsistent use.
class CaptureError : public std::runtime_error {
 public:
  explicit CaptureError(const std::string& message) : std::runtime_error(message) {}
};

std::set<VarName> free_vars(const QueryExpr& query);
std::set<VarName> free_vars(const PropExpr& prop);

// Renames free occurrences of from_var to to_var. Throws CaptureError when
// to_var is already free in the expression or a binder of to_var would
// capture a renamed occurrence.
QueryExpr alpha_rename(const QueryExpr& query, const VarName& from_var, const VarName& to_var);
PropExpr alpha_rename(const PropExpr& prop, const VarName& from_var, const VarName& to_var);

// Capture-avoiding simultaneous substitution of free variables; binders are
// freshened when a replacement would otherwise be captured.
QueryExpr substitute(const QueryExpr& query, const std::map<VarName, QueryExpr>& subst);
PropExpr substitute(const PropExpr& prop, const std::map<VarName, QueryExpr>& subst);

}  // namespace qmt
