#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmt/ast.hpp"
#include "qmt/signature.hpp"

namespace qmt {

// Built-in polymorphic symbols. They are typed per use site instead of being
// enumerated per simple type, and their names are reserved in every
// signature. Availability is switched on by install_predefined.
inline constexpr const char* kSingletonFun = "singleton";  // t -> {t}
inline constexpr const char* kUnionFun = "union";          // ({t}, {t}) -> {t}
inline constexpr const char* kEqualPred = "==";            // (t, t) -> prop
inline constexpr const char* kMemberPred = "in";           // (t, {t}) -> prop

bool is_predefined_fun(const std::string& name);
bool is_predefined_pred(const std::string& name);
bool is_reserved_symbol(const std::string& name);

// Returns a copy of the signature with the built-in symbols enabled.
Signature install_predefined(Signature sig);

QueryExpr singleton(QueryExpr element);

// One generator of a replacement: a variable ranging over a set query.
struct Generator {
  VarName var;
  QueryExpr domain;
};

// Surface forms that reduce to the kernel grammar.
struct ReplacementForm {
  std::vector<Generator> generators;  // at least one; later domains may use earlier vars
  QueryExpr body;                     // element query under all generators
};

struct SelectForm {
  std::vector<std::size_t> indices;  // 1-based components to keep
  QueryExpr from;                    // set of tuples
  PropExpr where;                    // may reference components as _1, _2, ...
};

struct ForLetForm {
  VarName var;        // for var in source
  QueryExpr source;
  VarName let_var;    // let let_var = bound
  QueryExpr bound;    // may use var
  PropExpr where;     // may use var and let_var
  QueryExpr body;     // may use var and let_var
};

struct DlBoxForm {
  ConceptName concept_name;
  RelExpr rel;
  QueryExpr filler;  // set query the relational successors must fall into
};

using SugarForm = std::variant<ReplacementForm, SelectForm, ForLetForm, DlBoxForm>;

// {body : x1 in Q1, ..., xk in Qk} as nested indexed unions of singletons.
QueryExpr desugar_replacement(const ReplacementForm& form);

// select n1, ..., nk from Q where F as a replacement of projections over a
// comprehension; _i in F becomes the i-th projection of the tuple variable.
QueryExpr desugar_select(const SelectForm& form);

// for x in Q let y = q(x) where F(x, y) return body(x, y), expanded through
// an intermediate set of (x, y) pairs.
QueryExpr desugar_for_let(const ForLetForm& form);

// Description-logic box: elements of the concept all of whose relational
// successors lie in the filler set.
QueryExpr desugar_dl_box(const DlBoxForm& form);

QueryExpr desugar(const SugarForm& form);

// Names like _3 that stand for tuple components inside a select filter.
bool is_component_var(const VarName& name, std::size_t* index_out = nullptr);

}  // namespace qmt
