#include "qmt/unify.hpp"

#include <algorithm>
#include <set>

namespace qmt::mmt {

namespace {

void walk(const Object& node, std::vector<BoundVar>& scope,
          const std::function<void(const Object&, const std::vector<BoundVar>&)>& visit) {
  if (node.kind() == Object::Kind::Bind) {
    bool wrapper = is_free_wrapper(node);
    if (!wrapper) visit(node, scope);
    std::size_t mark = scope.size();
    for (const auto& bv : node.bound_context()) {
      if (bv.type) walk(*bv.type, scope, visit);  // earlier entries are in scope
      scope.push_back(bv);
    }
    walk(node.body(), scope, visit);
    scope.resize(mark);
    return;
  }
  visit(node, scope);
  if (node.kind() == Object::Kind::App) {
    for (const auto& arg : node.args()) walk(arg, scope, visit);
  }
}

// Free variable names of an object (names not bound by a binder within it).
void collect_free_var_names(const Object& node, std::vector<std::string>& bound,
                            std::set<std::string>& out) {
  switch (node.kind()) {
    case Object::Kind::Var:
      if (std::find(bound.begin(), bound.end(), node.var_name()) == bound.end()) {
        out.insert(node.var_name());
      }
      return;
    case Object::Kind::App:
      collect_free_var_names(node.head(), bound, out);
      for (const auto& arg : node.args()) collect_free_var_names(arg, bound, out);
      return;
    case Object::Kind::Bind: {
      collect_free_var_names(node.binder(), bound, out);
      std::size_t mark = bound.size();
      for (const auto& bv : node.bound_context()) {
        if (bv.type) collect_free_var_names(*bv.type, bound, out);
        bound.push_back(bv.name);
      }
      collect_free_var_names(node.body(), bound, out);
      bound.resize(mark);
      return;
    }
    case Object::Kind::Sym:
    case Object::Kind::Lit:
      return;
  }
}

// Matching state: positional correspondence of binder variables entered on
// each side, plus the accumulated metavariable bindings.
struct Matcher {
  const std::vector<std::string>& metavars;
  std::vector<std::string> pattern_bound;
  std::vector<std::string> candidate_bound;
  std::map<std::string, Object> bindings;

  bool is_metavar(const std::string& name) const {
    return std::find(metavars.begin(), metavars.end(), name) != metavars.end();
  }

  // Rightmost (innermost) binder index, or npos.
  static std::size_t bound_pos(const std::vector<std::string>& stack, const std::string& name) {
    for (std::size_t i = stack.size(); i-- > 0;) {
      if (stack[i] == name) return i;
    }
    return static_cast<std::size_t>(-1);
  }

  bool bind_metavar(const std::string& name, const Object& term) {
    // A binder variable entered during the match may not escape into a
    // binding; variables of the occurrence's outer scope may.
    std::set<std::string> free;
    std::vector<std::string> none;
    collect_free_var_names(term, none, free);
    for (const auto& v : free) {
      if (bound_pos(candidate_bound, v) != static_cast<std::size_t>(-1)) return false;
    }
    auto it = bindings.find(name);
    if (it != bindings.end()) return alpha_equal(it->second, term);
    bindings.emplace(name, term);
    return true;
  }

  bool match(const Object& p, const Object& t) {
    if (p.kind() == Object::Kind::Var) {
      std::size_t ppos = bound_pos(pattern_bound, p.var_name());
      if (ppos != static_cast<std::size_t>(-1)) {
        // Bound in the pattern: positions must correspond.
        return t.kind() == Object::Kind::Var &&
               bound_pos(candidate_bound, t.var_name()) == ppos;
      }
      if (is_metavar(p.var_name())) return bind_metavar(p.var_name(), t);
      // A free non-metavariable stands for itself.
      return t.kind() == Object::Kind::Var && t.var_name() == p.var_name() &&
             bound_pos(candidate_bound, t.var_name()) == static_cast<std::size_t>(-1);
    }
    switch (p.kind()) {
      case Object::Kind::Sym:
        return t.kind() == Object::Kind::Sym && t.sym_uri() == p.sym_uri();
      case Object::Kind::Lit:
        return t.kind() == Object::Kind::Lit && t.lit_kind() == p.lit_kind() &&
               t.lit_value() == p.lit_value();
      case Object::Kind::App: {
        const Object& head = p.head();
        if (head.kind() == Object::Kind::Var &&
            bound_pos(pattern_bound, head.var_name()) == static_cast<std::size_t>(-1) &&
            is_metavar(head.var_name())) {
          return false;  // first-order: no matching under a metavariable head
        }
        if (t.kind() != Object::Kind::App) return false;
        if (t.args().size() != p.args().size()) return false;
        if (!match(head, t.head())) return false;
        for (std::size_t i = 0; i < p.args().size(); ++i) {
          if (!match(p.args()[i], t.args()[i])) return false;
        }
        return true;
      }
      case Object::Kind::Bind: {
        if (t.kind() != Object::Kind::Bind) return false;
        if (!match(p.binder(), t.binder())) return false;
        auto pctx = p.bound_context();
        auto tctx = t.bound_context();
        if (pctx.size() != tctx.size()) return false;
        std::size_t mark = pattern_bound.size();
        bool ok = true;
        for (std::size_t i = 0; i < pctx.size() && ok; ++i) {
          if (pctx[i].type.has_value() != tctx[i].type.has_value()) {
            ok = false;
            break;
          }
          if (pctx[i].type && !match(*pctx[i].type, *tctx[i].type)) {
            ok = false;
            break;
          }
          pattern_bound.push_back(pctx[i].name);
          candidate_bound.push_back(tctx[i].name);
        }
        ok = ok && match(p.body(), t.body());
        pattern_bound.resize(mark);
        candidate_bound.resize(mark);
        return ok;
      }
      case Object::Kind::Var:
        return false;  // handled above
    }
    return false;
  }
};

}  // namespace

void for_each_subobject(
    const Object& root,
    const std::function<void(const Object&, const std::vector<BoundVar>&)>& visit) {
  std::vector<BoundVar> scope;
  walk(root, scope, visit);
}

std::optional<Uri> head_symbol(const Object& object) {
  switch (object.kind()) {
    case Object::Kind::Sym:
      return object.sym_uri();
    case Object::Kind::App:
      if (object.head().kind() == Object::Kind::Sym) return object.head().sym_uri();
      return std::nullopt;
    case Object::Kind::Bind:
      if (object.binder().kind() == Object::Kind::Sym) return object.binder().sym_uri();
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

SubtermIndex SubtermIndex::build(const Library& library) {
  SubtermIndex index;
  auto add_component = [&index](const Uri& location, const Object& component) {
    for_each_subobject(component, [&](const Object& sub, const std::vector<BoundVar>& scope) {
      index.entries_.push_back(SubtermEntry{location, sub, scope});
      if (auto head = head_symbol(sub)) {
        index.by_head_[head->str()].push_back(index.entries_.size() - 1);
      }
    });
  };
  for (const auto& theory : library.theories()) {
    for (const auto& constant : theory.constants) {
      if (constant.type) add_component(constant.uri, *constant.type);
      if (constant.def) add_component(constant.uri, *constant.def);
    }
  }
  return index;
}

std::vector<const SubtermEntry*> SubtermIndex::candidates(const std::optional<Uri>& head) const {
  std::vector<const SubtermEntry*> out;
  if (head) {
    auto it = by_head_.find(head->str());
    if (it == by_head_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
    return out;
  }
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(&e);
  return out;
}

Object encode_substitution(const std::vector<Binding>& bindings) {
  Object head = Object::sym(subst_uri());
  if (bindings.empty()) return head;
  std::vector<Object> pairs;
  pairs.reserve(bindings.size());
  for (const auto& [name, term] : bindings) {
    pairs.push_back(
        Object::app(Object::sym(pair_uri()), {Object::var(name), term}));
  }
  return Object::app(std::move(head), std::move(pairs));
}

std::optional<std::vector<Binding>> match_first_order(const Object& pattern,
                                                      const std::vector<std::string>& metavars,
                                                      const Object& candidate) {
  Matcher m{metavars, {}, {}, {}};
  if (!m.match(pattern, candidate)) return std::nullopt;
  std::vector<Binding> out;
  for (const auto& name : metavars) {
    auto it = m.bindings.find(name);
    if (it != m.bindings.end()) out.emplace_back(name, it->second);
  }
  return out;
}

std::vector<UnifyHit> unify_against(const SubtermIndex& index, const Object& query) {
  auto [metactx, pattern] = split_free(query);
  std::vector<std::string> metavars;
  metavars.reserve(metactx.size());
  for (const auto& bv : metactx) metavars.push_back(bv.name);

  std::vector<UnifyHit> hits;
  std::set<std::string> seen;
  for (const SubtermEntry* entry : index.candidates(head_symbol(pattern))) {
    auto bindings = match_first_order(pattern, metavars, entry->subobject);
    if (!bindings) continue;
    UnifyHit hit{entry->location, wrap_free(entry->scope, entry->subobject),
                 encode_substitution(*bindings)};
    std::string key =
        hit.location.str() + '\n' + alpha_key(hit.matched) + '\n' + alpha_key(hit.substitution);
    if (seen.insert(std::move(key)).second) hits.push_back(std::move(hit));
  }
  return hits;
}

}  // namespace qmt::mmt
