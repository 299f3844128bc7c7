#include "qmt/ast.hpp"

#include <algorithm>

namespace qmt {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

}  // namespace

std::string to_text(const SimpleType& type) {
  if (type.is_base()) return type.components.front();
  std::string out = "(";
  for (std::size_t i = 0; i < type.components.size(); ++i) {
    if (i) out += ", ";
    out += type.components[i];
  }
  out += ')';
  return out;
}

std::string to_text(const GeneralType& type) {
  if (type.set) return "{" + to_text(type.element) + "}";
  return to_text(type.element);
}

bool equal(const RelExpr& a, const RelExpr& b) {
  const RelNode& na = a.node();
  const RelNode& nb = b.node();
  if (na.index() != nb.index()) return false;
  return std::visit(
      overloaded{
          [&](const RelAtom& x) { return x.name == std::get<RelAtom>(nb).name; },
          [&](const RelInverse& x) { return equal(x.sub, std::get<RelInverse>(nb).sub); },
          [&](const RelClosure& x) { return equal(x.sub, std::get<RelClosure>(nb).sub); },
          [&](const RelCompose& x) {
            const auto& y = std::get<RelCompose>(nb);
            return equal(x.left, y.left) && equal(x.right, y.right);
          },
          [&](const RelUnion& x) {
            const auto& y = std::get<RelUnion>(nb);
            return equal(x.left, y.left) && equal(x.right, y.right);
          },
          [&](const RelIntersect& x) {
            const auto& y = std::get<RelIntersect>(nb);
            return equal(x.left, y.left) && equal(x.right, y.right);
          },
          [&](const RelDiff& x) {
            const auto& y = std::get<RelDiff>(nb);
            return equal(x.left, y.left) && equal(x.right, y.right);
          },
      },
      na);
}

bool equal(const QueryExpr& a, const QueryExpr& b) {
  const QueryNode& na = a.node();
  const QueryNode& nb = b.node();
  if (na.index() != nb.index()) return false;
  return std::visit(
      overloaded{
          [&](const ConceptRef& x) { return x.name == std::get<ConceptRef>(nb).name; },
          [&](const VarRef& x) { return x.name == std::get<VarRef>(nb).name; },
          [&](const FunApp& x) {
            const auto& y = std::get<FunApp>(nb);
            if (x.fun != y.fun || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!equal(x.args[i], y.args[i])) return false;
            }
            return true;
          },
          [&](const TupleExpr& x) {
            const auto& y = std::get<TupleExpr>(nb);
            if (x.items.size() != y.items.size()) return false;
            for (std::size_t i = 0; i < x.items.size(); ++i) {
              if (!equal(x.items[i], y.items[i])) return false;
            }
            return true;
          },
          [&](const Projection& x) {
            const auto& y = std::get<Projection>(nb);
            return x.index == y.index && equal(x.tuple, y.tuple);
          },
          [&](const RelImage& x) {
            const auto& y = std::get<RelImage>(nb);
            return equal(x.rel, y.rel) && equal(x.arg, y.arg);
          },
          [&](const BigUnion& x) {
            const auto& y = std::get<BigUnion>(nb);
            return x.var == y.var && equal(x.domain, y.domain) && equal(x.body, y.body);
          },
          [&](const Comprehension& x) {
            const auto& y = std::get<Comprehension>(nb);
            return x.var == y.var && equal(x.domain, y.domain) && equal(x.filter, y.filter);
          },
          [&](const LiteralExpr& x) {
            const auto& y = std::get<LiteralExpr>(nb);
            return x.base_type == y.base_type && x.value == y.value;
          },
      },
      na);
}

bool equal(const PropExpr& a, const PropExpr& b) {
  const PropNode& na = a.node();
  const PropNode& nb = b.node();
  if (na.index() != nb.index()) return false;
  return std::visit(
      overloaded{
          [&](const PredApp& x) {
            const auto& y = std::get<PredApp>(nb);
            if (x.pred != y.pred || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!equal(x.args[i], y.args[i])) return false;
            }
            return true;
          },
          [&](const PropNot& x) { return equal(x.sub, std::get<PropNot>(nb).sub); },
          [&](const PropAnd& x) {
            const auto& y = std::get<PropAnd>(nb);
            return equal(x.left, y.left) && equal(x.right, y.right);
          },
          [&](const ForallIn& x) {
            const auto& y = std::get<ForallIn>(nb);
            return x.var == y.var && equal(x.domain, y.domain) && equal(x.body, y.body);
          },
      },
      na);
}

namespace {

void free_vars_rec(const QueryExpr& query, std::set<VarName>& out);

void free_vars_rec(const PropExpr& prop, std::set<VarName>& out) {
  std::visit(
      overloaded{
          [&](const PredApp& x) {
            for (const auto& a : x.args) free_vars_rec(a, out);
          },
          [&](const PropNot& x) { free_vars_rec(x.sub, out); },
          [&](const PropAnd& x) {
            free_vars_rec(x.left, out);
            free_vars_rec(x.right, out);
          },
          [&](const ForallIn& x) {
            free_vars_rec(x.domain, out);
            std::set<VarName> inner;
            free_vars_rec(x.body, inner);
            inner.erase(x.var);
            out.insert(inner.begin(), inner.end());
          },
      },
      prop.node());
}

void free_vars_rec(const QueryExpr& query, std::set<VarName>& out) {
  std::visit(
      overloaded{
          [&](const ConceptRef&) {},
          [&](const LiteralExpr&) {},
          [&](const VarRef& x) { out.insert(x.name); },
          [&](const FunApp& x) {
            for (const auto& a : x.args) free_vars_rec(a, out);
          },
          [&](const TupleExpr& x) {
            for (const auto& i : x.items) free_vars_rec(i, out);
          },
          [&](const Projection& x) { free_vars_rec(x.tuple, out); },
          [&](const RelImage& x) { free_vars_rec(x.arg, out); },
          [&](const BigUnion& x) {
            free_vars_rec(x.domain, out);
            std::set<VarName> inner;
            free_vars_rec(x.body, inner);
            inner.erase(x.var);
            out.insert(inner.begin(), inner.end());
          },
          [&](const Comprehension& x) {
            free_vars_rec(x.domain, out);
            std::set<VarName> inner;
            free_vars_rec(x.filter, inner);
            inner.erase(x.var);
            out.insert(inner.begin(), inner.end());
          },
      },
      query.node());
}

}  // namespace

std::set<VarName> free_vars(const QueryExpr& query) {
  std::set<VarName> out;
  free_vars_rec(query, out);
  return out;
}

std::set<VarName> free_vars(const PropExpr& prop) {
  std::set<VarName> out;
  free_vars_rec(prop, out);
  return out;
}

namespace {

struct Renamer {
  const VarName& from;
  const VarName& to;

  QueryExpr rename(const QueryExpr& query) const {
    return std::visit(
        overloaded{
            [&](const ConceptRef& x) { return QueryExpr::concept_ref(x.name); },
            [&](const LiteralExpr& x) { return QueryExpr::literal(x.value, x.base_type); },
            [&](const VarRef& x) {
              return QueryExpr::var(x.name == from ? to : x.name);
            },
            [&](const FunApp& x) {
              std::vector<QueryExpr> args;
              args.reserve(x.args.size());
              for (const auto& a : x.args) args.push_back(rename(a));
              return QueryExpr::apply(x.fun, std::move(args));
            },
            [&](const TupleExpr& x) {
              std::vector<QueryExpr> items;
              items.reserve(x.items.size());
              for (const auto& i : x.items) items.push_back(rename(i));
              return QueryExpr::tuple(std::move(items));
            },
            [&](const Projection& x) {
              return QueryExpr::proj(rename(x.tuple), x.index);
            },
            [&](const RelImage& x) {
              return QueryExpr::rel_image(x.rel, rename(x.arg));
            },
            [&](const BigUnion& x) {
              QueryExpr domain = rename(x.domain);
              if (x.var == from) {
                return QueryExpr::big_union(x.var, std::move(domain), x.body);
              }
              check_binder(x.var, free_vars(x.body));
              return QueryExpr::big_union(x.var, std::move(domain), rename(x.body));
            },
            [&](const Comprehension& x) {
              QueryExpr domain = rename(x.domain);
              if (x.var == from) {
                return QueryExpr::comprehension(x.var, std::move(domain), x.filter);
              }
              check_binder(x.var, free_vars(x.filter));
              return QueryExpr::comprehension(x.var, std::move(domain), rename(x.filter));
            },
        },
        query.node());
  }

  PropExpr rename(const PropExpr& prop) const {
    return std::visit(
        overloaded{
            [&](const PredApp& x) {
              std::vector<QueryExpr> args;
              args.reserve(x.args.size());
              for (const auto& a : x.args) args.push_back(rename(a));
              return PropExpr::pred(x.pred, std::move(args));
            },
            [&](const PropNot& x) { return PropExpr::negate(rename(x.sub)); },
            [&](const PropAnd& x) {
              return PropExpr::conj(rename(x.left), rename(x.right));
            },
            [&](const ForallIn& x) {
              QueryExpr domain = rename(x.domain);
              if (x.var == from) {
                return PropExpr::forall_in(x.var, std::move(domain), x.body);
              }
              check_binder(x.var, free_vars(x.body));
              return PropExpr::forall_in(x.var, std::move(domain), rename(x.body));
            },
        },
        prop.node());
  }

  void check_binder(const VarName& binder, const std::set<VarName>& body_free) const {
    if (binder == to && body_free.count(from)) {
      throw CaptureError("renaming " + from + " to " + to +
                         " would be captured by a binder of " + to);
    }
  }
};

}  // namespace

QueryExpr alpha_rename(const QueryExpr& query, const VarName& from_var, const VarName& to_var) {
  if (from_var == to_var) return query;
  if (free_vars(query).count(to_var)) {
    throw CaptureError("target name " + to_var + " is already free in the expression");
  }
  return Renamer{from_var, to_var}.rename(query);
}

PropExpr alpha_rename(const PropExpr& prop, const VarName& from_var, const VarName& to_var) {
  if (from_var == to_var) return prop;
  if (free_vars(prop).count(to_var)) {
    throw CaptureError("target name " + to_var + " is already free in the expression");
  }
  return Renamer{from_var, to_var}.rename(prop);
}

namespace {

using Subst = std::map<VarName, QueryExpr>;

bool replacement_mentions(const Subst& subst, const VarName& var) {
  for (const auto& [name, expr] : subst) {
    if (free_vars(expr).count(var)) return true;
  }
  return false;
}

VarName fresh_name(const VarName& base, const Subst& subst, const std::set<VarName>& avoid) {
  for (int i = 1;; ++i) {
    VarName candidate = base + "_" + std::to_string(i);
    if (avoid.count(candidate)) continue;
    if (subst.count(candidate)) continue;
    if (replacement_mentions(subst, candidate)) continue;
    return candidate;
  }
}

struct Substituter {
  QueryExpr subst_query(const QueryExpr& query, const Subst& subst) const {
    if (subst.empty()) return query;
    return std::visit(
        overloaded{
            [&](const ConceptRef& x) { return QueryExpr::concept_ref(x.name); },
            [&](const LiteralExpr& x) { return QueryExpr::literal(x.value, x.base_type); },
            [&](const VarRef& x) {
              auto it = subst.find(x.name);
              return it == subst.end() ? QueryExpr::var(x.name) : it->second;
            },
            [&](const FunApp& x) {
              std::vector<QueryExpr> args;
              args.reserve(x.args.size());
              for (const auto& a : x.args) args.push_back(subst_query(a, subst));
              return QueryExpr::apply(x.fun, std::move(args));
            },
            [&](const TupleExpr& x) {
              std::vector<QueryExpr> items;
              items.reserve(x.items.size());
              for (const auto& i : x.items) items.push_back(subst_query(i, subst));
              return QueryExpr::tuple(std::move(items));
            },
            [&](const Projection& x) {
              return QueryExpr::proj(subst_query(x.tuple, subst), x.index);
            },
            [&](const RelImage& x) {
              return QueryExpr::rel_image(x.rel, subst_query(x.arg, subst));
            },
            [&](const BigUnion& x) {
              QueryExpr domain = subst_query(x.domain, subst);
              auto [var, body] = enter_binder(x.var, QueryExpr(x.body), subst);
              return QueryExpr::big_union(var, std::move(domain),
                                          subst_query(body, inner_subst(x.var, subst)));
            },
            [&](const Comprehension& x) {
              QueryExpr domain = subst_query(x.domain, subst);
              auto [var, filter] = enter_binder_prop(x.var, x.filter, subst);
              return QueryExpr::comprehension(var, std::move(domain),
                                              subst_prop(filter, inner_subst(x.var, subst)));
            },
        },
        query.node());
  }

  PropExpr subst_prop(const PropExpr& prop, const Subst& subst) const {
    if (subst.empty()) return prop;
    return std::visit(
        overloaded{
            [&](const PredApp& x) {
              std::vector<QueryExpr> args;
              args.reserve(x.args.size());
              for (const auto& a : x.args) args.push_back(subst_query(a, subst));
              return PropExpr::pred(x.pred, std::move(args));
            },
            [&](const PropNot& x) { return PropExpr::negate(subst_prop(x.sub, subst)); },
            [&](const PropAnd& x) {
              return PropExpr::conj(subst_prop(x.left, subst), subst_prop(x.right, subst));
            },
            [&](const ForallIn& x) {
              QueryExpr domain = subst_query(x.domain, subst);
              auto [var, body] = enter_binder_forall(x.var, x.body, subst);
              return PropExpr::forall_in(var, std::move(domain),
                                         subst_prop(body, inner_subst(x.var, subst)));
            },
        },
        prop.node());
  }

  // Substitution under a binder drops the bound name; when a replacement
  // mentions the bound name, the binder is freshened first. The freshened
  // body is produced by substituting the old variable by the fresh one.
  Subst inner_subst(const VarName& var, const Subst& subst) const {
    Subst inner = subst;
    inner.erase(var);
    if (inner.empty() || !replacement_mentions(inner, var)) return inner;
    // The caller renamed the binder; the inner substitution keys are intact.
    return inner;
  }

  std::pair<VarName, QueryExpr> enter_binder(const VarName& var, const QueryExpr& body,
                                             const Subst& subst) const {
    Subst inner = subst;
    inner.erase(var);
    if (inner.empty() || !replacement_mentions(inner, var)) return {var, body};
    std::set<VarName> avoid = free_vars(body);
    VarName fresh = fresh_name(var, inner, avoid);
    Subst rename{{var, QueryExpr::var(fresh)}};
    return {fresh, subst_query(body, rename)};
  }

  std::pair<VarName, PropExpr> enter_binder_prop(const VarName& var, const PropExpr& filter,
                                                 const Subst& subst) const {
    Subst inner = subst;
    inner.erase(var);
    if (inner.empty() || !replacement_mentions(inner, var)) return {var, filter};
    std::set<VarName> avoid = free_vars(filter);
    VarName fresh = fresh_name(var, inner, avoid);
    Subst rename{{var, QueryExpr::var(fresh)}};
    return {fresh, subst_prop(filter, rename)};
  }

  std::pair<VarName, PropExpr> enter_binder_forall(const VarName& var, const PropExpr& body,
                                                   const Subst& subst) const {
    return enter_binder_prop(var, body, subst);
  }
};

}  // namespace

QueryExpr substitute(const QueryExpr& query, const std::map<VarName, QueryExpr>& subst) {
  return Substituter{}.subst_query(query, subst);
}

PropExpr substitute(const PropExpr& prop, const std::map<VarName, QueryExpr>& subst) {
  return Substituter{}.subst_prop(prop, subst);
}

}  // namespace qmt
