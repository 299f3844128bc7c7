#pragma once

#include <string>

#include "qmt/ast.hpp"

namespace qmt {

// Canonical textual rendering of expressions.  The output uses the minimal
// parenthesization that still reparses (via parse_query/parse_rel/parse_prop)
// to a structurally equal expression.  Only literals over the base types
// uri, obj, and xml are expressible; printing a literal of any other base
// type throws std::invalid_argument.
std::string print_query(const QueryExpr& query);
std::string print_rel(const RelExpr& rel);
std::string print_prop(const PropExpr& prop);

}  // namespace qmt
