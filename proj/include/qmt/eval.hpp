#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmt/ast.hpp"
#include "qmt/index.hpp"
#include "qmt/signature.hpp"
#include "qmt/value.hpp"

namespace qmt {

// Innermost failing application: the symbol, its evaluated arguments, and a
// human-readable reason.
struct UndefinedInfo {
  std::string symbol;
  std::vector<Value> args;
  std::string note;

  std::string to_text() const;
};

// Thrown inside evaluation when a partial function has no result; the public
// entry points translate it into an EvalOutcome.
class UndefinedError : public std::runtime_error {
 public:
  explicit UndefinedError(UndefinedInfo info)
      : std::runtime_error(info.to_text()), info_(std::move(info)) {}
  const UndefinedInfo& info() const { return info_; }

 private:
  UndefinedInfo info_;
};

// Interpretation of a signature: extents and adjacency from the index,
// executable functions and predicates per overload, and base type membership
// used by literals. Immutable during evaluation.
struct Model {
  using HostFunction = std::function<Value(const std::vector<Value>&)>;
  using HostPredicate = std::function<bool(const std::vector<Value>&)>;

  struct FunEntry {
    FunctionDecl decl;
    HostFunction fn;
  };
  struct PredEntry {
    PredicateDecl decl;
    HostPredicate fn;
  };

  Signature signature;
  Index index;
  std::map<FunName, std::vector<FunEntry>> functions;
  std::map<PredName, std::vector<PredEntry>> predicates;
  // Interpretation side of the signature's function family hook.
  std::function<std::optional<FunEntry>(const FunName&)> function_family;
  BaseTypeTests membership;
};

// Checks that declared function and predicate symbols have exactly one host
// entry per profile and that every entry is declared. Family names are
// covered by the hooks on both sides. Throws std::invalid_argument.
void validate_model(const Model& model);

struct EvalOptions {
  // Strict semantics propagate Undefined from every subterm. The lenient
  // flag confines Undefined at comprehension filters and quantifier bodies,
  // where it reads as false (element excluded).
  bool lenient_filter = false;
};

struct EvalOutcome {
  std::optional<Value> value;
  std::optional<UndefinedInfo> undefined;
  bool ok() const { return value.has_value(); }
};

struct PropOutcome {
  std::optional<bool> value;
  std::optional<UndefinedInfo> undefined;
  bool ok() const { return value.has_value(); }
};

// Runtime environment for open expressions; entries parallel a Context.
class Assignment {
 public:
  Assignment() = default;
  Assignment extended(VarName var, Value value) const {
    Assignment out = *this;
    out.entries_.emplace_back(std::move(var), std::move(value));
    return out;
  }
  const Value* lookup(const VarName& var) const {
    for (std::size_t i = entries_.size(); i-- > 0;) {
      if (entries_[i].first == var) return &entries_[i].second;
    }
    return nullptr;
  }

 private:
  std::vector<std::pair<VarName, Value>> entries_;
};

// Evaluates a closed query. Throws TypeError when the query does not
// typecheck (closedness violations included); partiality is reported through
// the outcome, never through exceptions.
EvalOutcome eval_query(const Model& model, const QueryExpr& query, const EvalOptions& opts = {});

// General form for open queries under a typing context and matching
// assignment.
EvalOutcome eval_query(const Model& model, const Context& ctx, const Assignment& assignment,
                       const QueryExpr& query, const EvalOptions& opts = {});

PropOutcome eval_prop(const Model& model, const Context& ctx, const Assignment& assignment,
                      const PropExpr& prop, const EvalOptions& opts = {});

}  // namespace qmt
