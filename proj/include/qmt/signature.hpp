#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmt/ast.hpp"

namespace qmt {

struct BaseTypeDecl {
  BaseTypeName name;
  bool operator==(const BaseTypeDecl&) const = default;
};

// Concept of elements of one base type, e.g. theory over uri.
struct ConceptDecl {
  ConceptName name;
  BaseTypeName member_type;
  bool operator==(const ConceptDecl&) const = default;
};

// Binary relation between two base types.
struct RelationDecl {
  RelationName name;
  BaseTypeName source;
  BaseTypeName target;
  bool operator==(const RelationDecl&) const = default;
};

struct FunctionDecl {
  FunName name;
  std::vector<GeneralType> params;
  GeneralType result;
  bool operator==(const FunctionDecl&) const = default;
};

struct PredicateDecl {
  PredName name;
  std::vector<GeneralType> params;
  bool operator==(const PredicateDecl&) const = default;
};

using SignatureDecl =
    std::variant<BaseTypeDecl, ConceptDecl, RelationDecl, FunctionDecl, PredicateDecl>;

const std::string& decl_name(const SignatureDecl& decl);

enum class SymbolKind { BaseType, Concept, Relation, Function, Predicate };

// Validated collection of declarations with one flat namespace. Functions and
// predicates may carry several overloads under one name; the other kinds are
// unique. Signatures are produced by check_signature; unchecked() exists for
// code that has already established the invariants.
class Signature {
 public:
  Signature() = default;

  // Assumes the declarations were validated (distinct names across kinds
  // except function/predicate overloads, distinct profiles per overload set,
  // all referenced base types declared first).
  static Signature unchecked(std::vector<SignatureDecl> decls);

  const std::vector<SignatureDecl>& decls() const { return decls_; }

  std::optional<SymbolKind> symbol_kind(const std::string& name) const;
  bool has_base_type(const BaseTypeName& name) const;
  const ConceptDecl* find_concept(const ConceptName& name) const;
  const RelationDecl* find_relation(const RelationName& name) const;

  // Declared overloads plus any produced by the function family hook.
  std::vector<FunctionDecl> function_overloads(const FunName& name) const;
  std::vector<PredicateDecl> predicate_overloads(const PredName& name) const;

  // Hook for families of function symbols whose names follow a scheme, such
  // as the position-indexed subobject accessors. The hook returns the
  // overloads for a name or an empty vector when the name is not in the
  // family.
  using FunctionFamily = std::function<std::vector<FunctionDecl>(const std::string&)>;
  void set_function_family(FunctionFamily family) { family_ = std::move(family); }
  const FunctionFamily& function_family_hook() const { return family_; }
  bool name_in_family(const std::string& name) const;

  // Enables the polymorphic built-in symbols (singleton, union, equality,
  // membership) in the checker and evaluator.
  void enable_predefined() { predefined_ = true; }
  bool predefined_enabled() const { return predefined_; }

 private:
  void index_decl(std::size_t i);

  std::vector<SignatureDecl> decls_;
  std::map<std::string, SymbolKind> kinds_;
  std::map<std::string, std::size_t> singles_;            // base/concept/relation
  std::map<std::string, std::vector<std::size_t>> multis_;  // function/predicate
  FunctionFamily family_;
  bool predefined_ = false;
};

}  // namespace qmt
