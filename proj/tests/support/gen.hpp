#pragma once

// Deterministic random data for the property tests. Every generator takes an
// explicit Rng; tests seed them with fixed constants so runs are repeatable.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmt/ast.hpp"
#include "qmt/eval.hpp"
#include "qmt/index.hpp"
#include "qmt/library.hpp"
#include "qmt/object.hpp"
#include "qmt/signature.hpp"
#include "qmt/sugar.hpp"
#include "qmt/value.hpp"

namespace testgen {

using namespace qmt;

class Rng {
 public:
  explicit Rng(std::uint32_t seed) : gen_(seed) {}

  // Uniform in [0, n); n must be positive.
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }
  int range(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_) < p; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }
  std::mt19937& raw() { return gen_; }

 private:
  std::mt19937 gen_;
};

// --- Toy universe -----------------------------------------------------------
// Values are uris u0..u{universe-1}. Concepts A, B, C and relations r, s range
// over them; succ steps cyclically through the universe; good holds on even
// indices. This is rich enough to exercise every kernel construct while
// keeping oracles a few lines long.

inline Value uval(std::size_t i) { return Value::uri("u" + std::to_string(i)); }

inline std::optional<std::size_t> uindex(const Value& v) {
  if (v.kind() != Value::Kind::Uri) return std::nullopt;
  const std::string& t = v.uri_text();
  if (t.size() < 2 || t[0] != 'u') return std::nullopt;
  std::size_t i = 0;
  for (std::size_t p = 1; p < t.size(); ++p) {
    if (t[p] < '0' || t[p] > '9') return std::nullopt;
    i = i * 10 + static_cast<std::size_t>(t[p] - '0');
  }
  return i;
}

struct EdgeList {
  std::size_t universe = 0;
  // concept name -> member indices (deduplicated)
  std::map<ConceptName, std::set<std::size_t>> extents;
  // relation name -> edges (deduplicated)
  std::map<RelationName, std::set<std::pair<std::size_t, std::size_t>>> edges;
};

inline const std::vector<ConceptName>& toy_concepts() {
  static const std::vector<ConceptName> names{"A", "B", "C"};
  return names;
}
inline const std::vector<RelationName>& toy_relations() {
  static const std::vector<RelationName> names{"r", "s"};
  return names;
}

inline std::vector<SignatureDecl> toy_signature_decls() {
  std::vector<SignatureDecl> decls;
  decls.push_back(BaseTypeDecl{"uri"});
  for (const auto& c : toy_concepts()) decls.push_back(ConceptDecl{c, "uri"});
  for (const auto& r : toy_relations()) decls.push_back(RelationDecl{r, "uri", "uri"});
  decls.push_back(FunctionDecl{"succ",
                               {GeneralType::elem(SimpleType::base("uri"))},
                               GeneralType::elem(SimpleType::base("uri"))});
  decls.push_back(PredicateDecl{"good", {GeneralType::elem(SimpleType::base("uri"))}});
  return decls;
}

inline Signature toy_signature() {
  Signature sig = Signature::unchecked(toy_signature_decls());
  sig.enable_predefined();
  return sig;
}

inline EdgeList random_edges(Rng& rng, std::size_t universe, std::size_t max_edges) {
  EdgeList out;
  out.universe = universe;
  for (const auto& c : toy_concepts()) out.extents[c];
  for (const auto& r : toy_relations()) out.edges[r];
  if (universe == 0) return out;
  for (const auto& c : toy_concepts()) {
    std::size_t count = rng.below(universe + 1);
    for (std::size_t k = 0; k < count; ++k) out.extents[c].insert(rng.below(universe));
  }
  for (const auto& r : toy_relations()) {
    std::size_t count = rng.below(max_edges + 1);
    for (std::size_t k = 0; k < count; ++k) {
      out.edges[r].insert({rng.below(universe), rng.below(universe)});
    }
  }
  return out;
}

inline FactSet to_facts(const EdgeList& e) {
  FactSet facts;
  for (const auto& [name, members] : e.extents) {
    for (std::size_t i : members) facts.concepts.push_back({name, uval(i)});
  }
  for (const auto& [name, pairs] : e.edges) {
    for (const auto& [a, b] : pairs) facts.relations.push_back({name, uval(a), uval(b)});
  }
  return facts;
}

inline Model toy_model(const EdgeList& e) {
  Model model;
  model.signature = toy_signature();
  model.index = build_index(model.signature, to_facts(e));
  std::size_t universe = e.universe;
  model.membership["uri"] = [universe](const Value& v) {
    auto i = uindex(v);
    return i.has_value() && *i < universe;
  };
  auto elem_uri = GeneralType::elem(SimpleType::base("uri"));
  model.functions["succ"].push_back(
      {FunctionDecl{"succ", {elem_uri}, elem_uri},
       [universe](const std::vector<Value>& args) {
         auto i = uindex(args[0]);
         if (!i || universe == 0) {
           throw UndefinedError(UndefinedInfo{"succ", args, "no successor"});
         }
         return uval((*i + 1) % universe);
       }});
  model.predicates["good"].push_back(
      {PredicateDecl{"good", {elem_uri}},
       [](const std::vector<Value>& args) {
         auto i = uindex(args[0]);
         return i.has_value() && *i % 2 == 0;
       }});
  validate_model(model);
  return model;
}

// --- Random relation expressions ---------------------------------------------

inline RelExpr random_rel(Rng& rng, int depth) {
  if (depth <= 0 || rng.chance(0.3)) return RelExpr::atom(rng.pick(toy_relations()));
  switch (rng.below(6)) {
    case 0: return RelExpr::inverse(random_rel(rng, depth - 1));
    case 1: return RelExpr::closure(random_rel(rng, depth - 1));
    case 2: return RelExpr::compose(random_rel(rng, depth - 1), random_rel(rng, depth - 1));
    case 3: return RelExpr::set_union(random_rel(rng, depth - 1), random_rel(rng, depth - 1));
    case 4: return RelExpr::intersect(random_rel(rng, depth - 1), random_rel(rng, depth - 1));
    default: return RelExpr::diff(random_rel(rng, depth - 1), random_rel(rng, depth - 1));
  }
}

// --- Random well-typed queries -------------------------------------------------
// Generates closed queries over the toy signature, by target type. Literals
// occasionally fall outside the model universe so evaluation exercises the
// Undefined paths; everything still typechecks.

class QueryGen {
 public:
  QueryGen(Rng& rng, std::size_t universe) : rng_(rng), universe_(universe) {}

  QueryExpr closed_set_query(int depth) {
    SimpleType st = random_simple();
    return set_query(st, {}, depth);
  }

 private:
  using Scope = std::vector<std::pair<VarName, SimpleType>>;

  Rng& rng_;
  std::size_t universe_;
  int fresh_ = 0;

  SimpleType random_simple() {
    if (rng_.chance(0.7)) return SimpleType::base("uri");
    std::vector<BaseTypeName> parts(2 + rng_.below(2), "uri");
    return SimpleType{parts};
  }

  VarName fresh() { return "v" + std::to_string(fresh_++); }

  QueryExpr literal_uri() {
    std::size_t bound = universe_ + 2;  // sometimes outside the universe
    return QueryExpr::literal(uval(rng_.below(bound)), "uri");
  }

  std::vector<std::pair<VarName, SimpleType>> vars_of(const Scope& scope,
                                                      const SimpleType& st) {
    std::vector<std::pair<VarName, SimpleType>> out;
    for (const auto& e : scope) {
      if (e.second == st) out.push_back(e);
    }
    return out;
  }

  QueryExpr elem_query(const SimpleType& st, const Scope& scope, int depth) {
    auto candidates = vars_of(scope, st);
    if (!candidates.empty() && rng_.chance(0.4)) {
      return QueryExpr::var(rng_.pick(candidates).first);
    }
    if (st.is_base()) {
      // base "uri"
      if (depth > 0 && rng_.chance(0.3)) {
        return QueryExpr::apply("succ", {elem_query(st, scope, depth - 1)});
      }
      // project a component out of a product-typed variable when one exists
      if (depth > 0 && rng_.chance(0.2)) {
        for (const auto& e : scope) {
          if (!e.second.is_base()) {
            std::size_t index = 1 + rng_.below(e.second.arity());
            return QueryExpr::proj(QueryExpr::var(e.first), index);
          }
        }
      }
      return literal_uri();
    }
    std::vector<QueryExpr> items;
    for (std::size_t i = 0; i < st.arity(); ++i) {
      items.push_back(elem_query(SimpleType::base(st.components[i]), scope, depth - 1));
    }
    return QueryExpr::tuple(std::move(items));
  }

  PropExpr prop(const Scope& scope, int depth) {
    if (depth <= 0 || rng_.chance(0.4)) {
      switch (rng_.below(3)) {
        case 0:
          return PropExpr::pred("good", {elem_query(SimpleType::base("uri"), scope, 1)});
        case 1: {
          SimpleType st = SimpleType::base("uri");
          return PropExpr::pred(kEqualPred,
                                {elem_query(st, scope, 1), elem_query(st, scope, 1)});
        }
        default: {
          SimpleType st = SimpleType::base("uri");
          return PropExpr::pred(kMemberPred,
                                {elem_query(st, scope, 1), set_query(st, scope, 1)});
        }
      }
    }
    switch (rng_.below(3)) {
      case 0:
        return PropExpr::negate(prop(scope, depth - 1));
      case 1:
        return PropExpr::conj(prop(scope, depth - 1), prop(scope, depth - 1));
      default: {
        SimpleType st = SimpleType::base("uri");
        VarName v = fresh();
        Scope inner = scope;
        inner.emplace_back(v, st);
        return PropExpr::forall_in(v, set_query(st, scope, depth - 1),
                                   prop(inner, depth - 1));
      }
    }
  }

  QueryExpr set_query(const SimpleType& st, const Scope& scope, int depth) {
    if (depth <= 0) {
      if (st.is_base() && rng_.chance(0.6)) {
        return QueryExpr::concept_ref(rng_.pick(toy_concepts()));
      }
      return QueryExpr::apply(kSingletonFun, {elem_query(st, scope, 0)});
    }
    std::size_t roll = rng_.below(st.is_base() ? 7 : 5);
    switch (roll) {
      case 0:
        return QueryExpr::apply(kSingletonFun, {elem_query(st, scope, depth - 1)});
      case 1:
        return QueryExpr::apply(kUnionFun, {set_query(st, scope, depth - 1),
                                            set_query(st, scope, depth - 1)});
      case 2: {
        VarName v = fresh();
        Scope inner = scope;
        inner.emplace_back(v, st);
        return QueryExpr::comprehension(v, set_query(st, scope, depth - 1),
                                        prop(inner, depth - 1));
      }
      case 3: {
        VarName v = fresh();
        SimpleType dom = SimpleType::base("uri");
        Scope inner = scope;
        inner.emplace_back(v, dom);
        return QueryExpr::big_union(v, set_query(dom, scope, depth - 1),
                                    set_query(st, inner, depth - 1));
      }
      case 4: {
        if (st.is_base()) {
          return QueryExpr::rel_image(random_rel(rng_, depth - 1),
                                      elem_query(st, scope, depth - 1));
        }
        return QueryExpr::apply(kSingletonFun, {elem_query(st, scope, depth - 1)});
      }
      default:
        return QueryExpr::concept_ref(rng_.pick(toy_concepts()));
    }
  }
};

// --- Random objects and libraries ------------------------------------------------

inline Uri pool_sym(Rng& rng) { return Uri("g?t?c" + std::to_string(rng.below(8))); }

// Closed except for the names in scope; size_budget caps the node count.
inline Object random_object(Rng& rng, std::vector<std::string>& scope, int depth,
                            int& size_budget) {
  --size_budget;
  bool leaf = depth <= 0 || size_budget <= 1 || rng.chance(0.3);
  if (leaf) {
    if (!scope.empty() && rng.chance(0.5)) {
      return Object::var(scope[rng.below(scope.size())]);
    }
    if (rng.chance(0.15)) {
      return rng.chance(0.5) ? Object::lit("integer", std::to_string(rng.below(100)))
                             : Object::lit("string", "s" + std::to_string(rng.below(10)));
    }
    return Object::sym(pool_sym(rng));
  }
  if (rng.chance(0.7)) {
    std::size_t arity = 1 + rng.below(3);
    std::vector<Object> args;
    for (std::size_t i = 0; i < arity; ++i) {
      args.push_back(random_object(rng, scope, depth - 1, size_budget));
    }
    return Object::app(Object::sym(pool_sym(rng)), std::move(args));
  }
  static const std::vector<std::string> names{"x", "y", "z"};
  std::size_t count = 1 + rng.below(2);
  std::vector<BoundVar> ctx;
  std::size_t mark = scope.size();
  for (std::size_t i = 0; i < count; ++i) {
    BoundVar bv{names[rng.below(names.size())], std::nullopt};
    if (rng.chance(0.4)) bv.type = random_object(rng, scope, depth - 1, size_budget);
    scope.push_back(bv.name);
    ctx.push_back(std::move(bv));
  }
  Object body = random_object(rng, scope, depth - 1, size_budget);
  scope.resize(mark);
  return Object::bind(Object::sym(pool_sym(rng)), std::move(ctx), std::move(body));
}

inline Object random_closed_object(Rng& rng, int depth, int size_budget) {
  std::vector<std::string> scope;
  return random_object(rng, scope, depth, size_budget);
}

inline mmt::Library random_library(Rng& rng, int subterm_budget) {
  std::vector<mmt::Constant> constants;
  // Declare the symbol pool itself so membership checks hold.
  for (std::size_t i = 0; i < 8; ++i) {
    constants.push_back(mmt::Constant{Uri("g?t?c" + std::to_string(i)), std::nullopt,
                                      std::nullopt});
  }
  int budget = subterm_budget;
  int serial = 0;
  while (budget > 0) {
    mmt::Constant c;
    c.uri = Uri("g?t?k" + std::to_string(serial++));
    if (rng.chance(0.8)) c.type = random_closed_object(rng, 3, budget);
    if (rng.chance(0.6)) c.def = random_closed_object(rng, 3, budget);
    budget -= 8;  // rough per-constant cost; the object budget caps precisely
    constants.push_back(std::move(c));
  }
  mmt::Theory t;
  t.uri = Uri("g?t");
  t.constants = std::move(constants);
  return mmt::Library::from_parts({std::move(t)}, {}, {});
}

// Pattern with metavariables M0, M1 wrapped in a free binder. Bodies reuse the
// same symbol pool as random libraries so matches actually occur.
inline Object random_pattern(Rng& rng, int depth, int size_budget) {
  std::vector<std::string> scope;
  std::vector<BoundVar> metactx;
  std::size_t metavars = 1 + rng.below(2);
  for (std::size_t i = 0; i < metavars; ++i) {
    std::string name = "M" + std::to_string(i);
    metactx.push_back(BoundVar{name, std::nullopt});
    scope.push_back(name);
  }
  Object body = random_object(rng, scope, depth, size_budget);
  return mmt::wrap_free(std::move(metactx), body);
}

}  // namespace testgen
