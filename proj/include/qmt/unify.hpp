#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmt/library.hpp"
#include "qmt/object.hpp"

namespace qmt::mmt {

// Enumerates an object and its descendants together with the binder
// variables in scope at each occurrence (outermost first). The enumeration
// recurses into application arguments, binder-context type annotations (with
// the earlier entries in scope), and binder bodies; application heads and
// binder symbols are part of their node, not separate occurrences.
// Free-binder wrappers are representation plumbing: their variables enter
// the scope and the wrapper node itself is not visited.
void for_each_subobject(
    const Object& root,
    const std::function<void(const Object&, const std::vector<BoundVar>&)>& visit);

// Head symbol: an application headed by a symbol, a binding's binder symbol,
// or a symbol itself. Everything else is headless.
std::optional<Uri> head_symbol(const Object& object);

struct SubtermEntry {
  Uri location;                 // constant whose type or definiens holds it
  Object subobject;             // the occurrence, unwrapped
  std::vector<BoundVar> scope;  // binders in scope at the occurrence
};

// Flat index of every subobject of every constant component (types and
// definientia), keyed by head symbol for candidate narrowing.
class SubtermIndex {
 public:
  static SubtermIndex build(const Library& library);

  const std::vector<SubtermEntry>& entries() const { return entries_; }
  // Entries with the given head, or every entry for a headless pattern.
  std::vector<const SubtermEntry*> candidates(const std::optional<Uri>& head) const;

 private:
  std::vector<SubtermEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> by_head_;
};

using Binding = std::pair<std::string, Object>;

// subst(pair(x1,t1), ..., pair(xk,tk)) over the reserved URIs; the empty
// substitution is the bare subst symbol (applications need arguments).
Object encode_substitution(const std::vector<Binding>& bindings);

// First-order match of pattern against candidate: metavariables bind whole
// subterms (consistently, up to alpha-equality), other variables and binders
// must correspond positionally, applications headed by a metavariable do not
// match anything, and no candidate-side binder variable may escape into a
// binding. Returns the bindings in metavars order, restricted to the
// metavariables that occur.
std::optional<std::vector<Binding>> match_first_order(const Object& pattern,
                                                      const std::vector<std::string>& metavars,
                                                      const Object& candidate);

struct UnifyHit {
  Uri location;
  Object matched;       // occurrence wrapped in its scope context
  Object substitution;  // encoded with encode_substitution
};

// All distinct hits of the query against the indexed library. The query's
// metavariables are the variables of its outer free-binder; a query without
// one is ground and matches alpha-equal occurrences only.
std::vector<UnifyHit> unify_against(const SubtermIndex& index, const Object& query);

}  // namespace qmt::mmt
