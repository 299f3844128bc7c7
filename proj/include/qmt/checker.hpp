#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmt/ast.hpp"
#include "qmt/signature.hpp"

namespace qmt {

enum class ErrorKind {
  UnknownSymbol,
  ArityMismatch,
  TypeMismatch,
  NotAProduct,
  ProjOutOfRange,
  RelationEndpointMismatch,
  DuplicateName,
  OverloadAmbiguous,
  UnboundVariable,
};

std::string to_text(ErrorKind kind);

// Typechecking failure carrying the error kind and a path into the offending
// subexpression ("$" is the checked expression, segments like ".args[0]" or
// ".domain" descend into children).
class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorKind kind, std::string path, const std::string& message)
      : std::runtime_error(to_text(kind) + " at " + path + ": " + message),
        kind_(kind),
        path_(std::move(path)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& path() const { return path_; }

 private:
  ErrorKind kind_;
  std::string path_;
};

struct SignatureCheck {
  std::optional<Signature> signature;
  std::vector<TypeError> errors;
  bool ok() const { return signature.has_value(); }
};

// Validates declarations in order: fresh names in the flat namespace (with
// function/predicate overloads allowed under distinct profiles), referenced
// base types declared beforehand, reserved built-in names rejected. Invalid
// declarations are reported and skipped so one pass collects all errors.
SignatureCheck check_signature(const std::vector<SignatureDecl>& decls);

// Throws TypeError (UnknownSymbol) when a component base type is undeclared.
void check_type(const Signature& sig, const GeneralType& type, const std::string& path = "$");

// Infers the unique type of a query expression; throws TypeError.
GeneralType infer_query(const Signature& sig, const Context& ctx, const QueryExpr& query);

// Returns the (source, target) base types of a relation expression.
std::pair<BaseTypeName, BaseTypeName> check_relation(const Signature& sig, const RelExpr& rel);

// Checks a proposition under the context; throws TypeError.
void check_prop(const Signature& sig, const Context& ctx, const PropExpr& prop);

// API boundary guard: evaluation accepts closed queries only.
void require_closed(const QueryExpr& query);

}  // namespace qmt
