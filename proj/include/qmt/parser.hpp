#pragma once

#include <string>

#include "qmt/ast.hpp"
#include "qmt/signature.hpp"

namespace qmt {

// Parsers for the textual surface syntax. The signature is consulted for one
// thing only: whether a bare identifier names a declared concept (bound
// variables shadow concepts, anything else is a variable reference). All
// other name resolution is the checker's job, so parse errors stay purely
// syntactic.
//
// Grammar sketch (see README for the full table):
//   query   = 'union' x 'in' query '.' query | 'union(' query ',' query ')'
//           | rel 'of' query | '{' x 'in' query '|' prop '}'
//           | '{' query ':' x 'in' query {',' x 'in' query} '}'
//           | 'select' i {',' i} 'from' query ['where' prop]
//           | 'for' x 'in' query 'let' y '=' query 'where' prop 'return' query
//           | 'box' '^' c rel '.' query
//           | f '(' args ')' | '(' query {',' query} ')' | query '.' i
//           | 'uri' STRING | 'obj' JSON-TERM | 'xml' STRING | IDENT
//   rel     = rel '\' rel | rel '&' rel | rel '|' rel | rel ';' rel
//           | 'inv' rel | rel '+' | name | '(' rel ')'
//   prop    = prop '&&' prop | '!' prop | 'forall' x 'in' query '.' prop
//           | query '==' query | query 'in' query | p '(' args ')'
QueryExpr parse_query(const std::string& text, const Signature& sig);
RelExpr parse_rel(const std::string& text, const Signature& sig);
PropExpr parse_prop(const std::string& text, const Signature& sig);

}  // namespace qmt
