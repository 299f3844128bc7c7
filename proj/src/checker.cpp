#include "qmt/checker.hpp"

#include <algorithm>

#include "qmt/sugar.hpp"

namespace qmt {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

std::string profile_text(const std::vector<GeneralType>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += to_text(params[i]);
  }
  out += ')';
  return out;
}

}  // namespace

std::string to_text(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::NotAProduct: return "NotAProduct";
    case ErrorKind::ProjOutOfRange: return "ProjOutOfRange";
    case ErrorKind::RelationEndpointMismatch: return "RelationEndpointMismatch";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::OverloadAmbiguous: return "OverloadAmbiguous";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
  }
  return "TypeError";
}

namespace {

void check_simple_type(const Signature& sig, const SimpleType& type, const std::string& path) {
  if (type.components.empty()) {
    throw TypeError(ErrorKind::TypeMismatch, path, "product type needs at least one component");
  }
  for (const auto& base : type.components) {
    if (!sig.has_base_type(base)) {
      throw TypeError(ErrorKind::UnknownSymbol, path, "base type " + base + " is not declared");
    }
  }
}

void check_decl(const Signature& sig, const SignatureDecl& decl, const std::string& path) {
  const std::string& name = decl_name(decl);
  if (name.empty()) {
    throw TypeError(ErrorKind::UnknownSymbol, path, "declaration name must be non-empty");
  }
  if (is_reserved_symbol(name)) {
    throw TypeError(ErrorKind::DuplicateName, path,
                    name + " collides with a built-in symbol");
  }
  std::visit(
      overloaded{
          [&](const BaseTypeDecl&) {
            if (sig.symbol_kind(name)) {
              throw TypeError(ErrorKind::DuplicateName, path, name + " is already declared");
            }
          },
          [&](const ConceptDecl& d) {
            if (sig.symbol_kind(name)) {
              throw TypeError(ErrorKind::DuplicateName, path, name + " is already declared");
            }
            if (!sig.has_base_type(d.member_type)) {
              throw TypeError(ErrorKind::UnknownSymbol, path,
                              "base type " + d.member_type + " is not declared");
            }
          },
          [&](const RelationDecl& d) {
            if (sig.symbol_kind(name)) {
              throw TypeError(ErrorKind::DuplicateName, path, name + " is already declared");
            }
            if (!sig.has_base_type(d.source)) {
              throw TypeError(ErrorKind::UnknownSymbol, path,
                              "base type " + d.source + " is not declared");
            }
            if (!sig.has_base_type(d.target)) {
              throw TypeError(ErrorKind::UnknownSymbol, path,
                              "base type " + d.target + " is not declared");
            }
          },
          [&](const FunctionDecl& d) {
            auto kind = sig.symbol_kind(name);
            if (kind && *kind != SymbolKind::Function) {
              throw TypeError(ErrorKind::DuplicateName, path,
                              name + " is already declared with another kind");
            }
            for (std::size_t i = 0; i < d.params.size(); ++i) {
              check_simple_type(sig, d.params[i].element, path + ".params[" + std::to_string(i) + "]");
            }
            check_simple_type(sig, d.result.element, path + ".result");
            for (const auto& prev : sig.function_overloads(name)) {
              if (prev.params == d.params) {
                throw TypeError(ErrorKind::DuplicateName, path,
                                name + profile_text(d.params) + " is already declared");
              }
            }
          },
          [&](const PredicateDecl& d) {
            auto kind = sig.symbol_kind(name);
            if (kind && *kind != SymbolKind::Predicate) {
              throw TypeError(ErrorKind::DuplicateName, path,
                              name + " is already declared with another kind");
            }
            for (std::size_t i = 0; i < d.params.size(); ++i) {
              check_simple_type(sig, d.params[i].element, path + ".params[" + std::to_string(i) + "]");
            }
            for (const auto& prev : sig.predicate_overloads(name)) {
              if (prev.params == d.params) {
                throw TypeError(ErrorKind::DuplicateName, path,
                                name + profile_text(d.params) + " is already declared");
              }
            }
          },
      },
      decl);
}

}  // namespace

SignatureCheck check_signature(const std::vector<SignatureDecl>& decls) {
  SignatureCheck out;
  std::vector<SignatureDecl> accepted;
  Signature partial;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    std::string path = "decls[" + std::to_string(i) + "]";
    try {
      check_decl(partial, decls[i], path);
      accepted.push_back(decls[i]);
      partial = Signature::unchecked(accepted);
    } catch (const TypeError& err) {
      out.errors.push_back(err);
    }
  }
  if (out.errors.empty()) {
    out.signature = std::move(partial);
  }
  return out;
}

void check_type(const Signature& sig, const GeneralType& type, const std::string& path) {
  check_simple_type(sig, type.element, path);
}

namespace {

// Shared inference walk for queries and propositions. Paths name the route
// from the root expression to the failure.
struct Inference {
  const Signature& sig;

  GeneralType query(const QueryExpr& q, const Context& ctx, const std::string& path) const {
    return std::visit(
        overloaded{
            [&](const ConceptRef& x) {
              const ConceptDecl* decl = sig.find_concept(x.name);
              if (!decl) {
                throw TypeError(ErrorKind::UnknownSymbol, path,
                                "concept " + x.name + " is not declared");
              }
              return GeneralType::set_of(SimpleType::base(decl->member_type));
            },
            [&](const VarRef& x) {
              const SimpleType* type = ctx.lookup(x.name);
              if (!type) {
                throw TypeError(ErrorKind::UnboundVariable, path,
                                "variable " + x.name + " is not bound");
              }
              return GeneralType::elem(*type);
            },
            [&](const FunApp& x) {
              std::vector<GeneralType> args;
              args.reserve(x.args.size());
              for (std::size_t i = 0; i < x.args.size(); ++i) {
                args.push_back(query(x.args[i], ctx, path + ".args[" + std::to_string(i) + "]"));
              }
              return apply_function(x.fun, args, path);
            },
            [&](const TupleExpr& x) {
              SimpleType combined;
              for (std::size_t i = 0; i < x.items.size(); ++i) {
                GeneralType t = query(x.items[i], ctx, path + ".items[" + std::to_string(i) + "]");
                if (t.set) {
                  throw TypeError(ErrorKind::TypeMismatch,
                                  path + ".items[" + std::to_string(i) + "]",
                                  "tuple components must be element queries");
                }
                for (const auto& base : t.element.components) {
                  combined.components.push_back(base);
                }
              }
              return GeneralType::elem(std::move(combined));
            },
            [&](const Projection& x) {
              GeneralType t = query(x.tuple, ctx, path + ".tuple");
              if (t.set || t.element.arity() < 2) {
                throw TypeError(ErrorKind::NotAProduct, path,
                                "projection requires a product of arity at least 2, got " +
                                    to_text(t));
              }
              if (x.index < 1 || x.index > t.element.arity()) {
                throw TypeError(ErrorKind::ProjOutOfRange, path,
                                "index " + std::to_string(x.index) + " outside 1.." +
                                    std::to_string(t.element.arity()));
              }
              return GeneralType::elem(SimpleType::base(t.element.components[x.index - 1]));
            },
            [&](const RelImage& x) {
              auto [source, target] = relation(x.rel, path + ".rel");
              GeneralType t = query(x.arg, ctx, path + ".arg");
              if (t.set || !t.element.is_base() || t.element.components.front() != source) {
                throw TypeError(ErrorKind::TypeMismatch, path + ".arg",
                                "relation argument must be an element of " + source +
                                    ", got " + to_text(t));
              }
              return GeneralType::set_of(SimpleType::base(target));
            },
            [&](const BigUnion& x) {
              GeneralType domain = query(x.domain, ctx, path + ".domain");
              if (!domain.set) {
                throw TypeError(ErrorKind::TypeMismatch, path + ".domain",
                                "union domain must be a set, got " + to_text(domain));
              }
              Context inner = ctx.extended(x.var, domain.element);
              GeneralType body = query(x.body, inner, path + ".body");
              if (!body.set) {
                throw TypeError(ErrorKind::TypeMismatch, path + ".body",
                                "union body must be a set, got " + to_text(body));
              }
              return body;
            },
            [&](const Comprehension& x) {
              GeneralType domain = query(x.domain, ctx, path + ".domain");
              if (!domain.set) {
                throw TypeError(ErrorKind::TypeMismatch, path + ".domain",
                                "comprehension domain must be a set, got " + to_text(domain));
              }
              Context inner = ctx.extended(x.var, domain.element);
              prop(x.filter, inner, path + ".filter");
              return domain;
            },
            [&](const LiteralExpr& x) {
              if (!sig.has_base_type(x.base_type)) {
                throw TypeError(ErrorKind::UnknownSymbol, path,
                                "base type " + x.base_type + " is not declared");
              }
              return GeneralType::elem(SimpleType::base(x.base_type));
            },
        },
        q.node());
  }

  std::pair<BaseTypeName, BaseTypeName> relation(const RelExpr& r, const std::string& path) const {
    return std::visit(
        overloaded{
            [&](const RelAtom& x) {
              const RelationDecl* decl = sig.find_relation(x.name);
              if (!decl) {
                throw TypeError(ErrorKind::UnknownSymbol, path,
                                "relation " + x.name + " is not declared");
              }
              return std::pair{decl->source, decl->target};
            },
            [&](const RelInverse& x) {
              auto [source, target] = relation(x.sub, path + ".sub");
              return std::pair{target, source};
            },
            [&](const RelClosure& x) {
              auto [source, target] = relation(x.sub, path + ".sub");
              if (source != target) {
                throw TypeError(ErrorKind::RelationEndpointMismatch, path,
                                "transitive closure needs equal endpoints, got (" + source +
                                    ", " + target + ")");
              }
              return std::pair{source, target};
            },
            [&](const RelCompose& x) {
              auto [ls, lt] = relation(x.left, path + ".left");
              auto [rs, rt] = relation(x.right, path + ".right");
              if (lt != rs) {
                throw TypeError(ErrorKind::RelationEndpointMismatch, path,
                                "composition middle types differ: " + lt + " vs " + rs);
              }
              return std::pair{ls, rt};
            },
            [&](const RelUnion& x) { return same_endpoints(x.left, x.right, path); },
            [&](const RelIntersect& x) { return same_endpoints(x.left, x.right, path); },
            [&](const RelDiff& x) { return same_endpoints(x.left, x.right, path); },
        },
        r.node());
  }

  std::pair<BaseTypeName, BaseTypeName> same_endpoints(const RelExpr& left, const RelExpr& right,
                                                       const std::string& path) const {
    auto l = relation(left, path + ".left");
    auto r = relation(right, path + ".right");
    if (l != r) {
      throw TypeError(ErrorKind::RelationEndpointMismatch, path,
                      "operands need identical endpoints: (" + l.first + ", " + l.second +
                          ") vs (" + r.first + ", " + r.second + ")");
    }
    return l;
  }

  void prop(const PropExpr& p, const Context& ctx, const std::string& path) const {
    std::visit(
        overloaded{
            [&](const PredApp& x) {
              std::vector<GeneralType> args;
              args.reserve(x.args.size());
              for (std::size_t i = 0; i < x.args.size(); ++i) {
                args.push_back(query(x.args[i], ctx, path + ".args[" + std::to_string(i) + "]"));
              }
              apply_predicate(x.pred, args, path);
            },
            [&](const PropNot& x) { prop(x.sub, ctx, path + ".sub"); },
            [&](const PropAnd& x) {
              prop(x.left, ctx, path + ".left");
              prop(x.right, ctx, path + ".right");
            },
            [&](const ForallIn& x) {
              GeneralType domain = query(x.domain, ctx, path + ".domain");
              if (!domain.set) {
                throw TypeError(ErrorKind::TypeMismatch, path + ".domain",
                                "quantifier domain must be a set, got " + to_text(domain));
              }
              Context inner = ctx.extended(x.var, domain.element);
              prop(x.body, inner, path + ".body");
            },
        },
        p.node());
  }

  GeneralType apply_function(const FunName& fun, const std::vector<GeneralType>& args,
                             const std::string& path) const {
    if (sig.predefined_enabled() && is_predefined_fun(fun)) {
      return predefined_function(fun, args, path);
    }
    auto overloads = sig.function_overloads(fun);
    if (overloads.empty()) {
      throw TypeError(ErrorKind::UnknownSymbol, path, "function " + fun + " is not declared");
    }
    return GeneralType(resolve(fun, overloads, args, path).result);
  }

  void apply_predicate(const PredName& pred, const std::vector<GeneralType>& args,
                       const std::string& path) const {
    if (sig.predefined_enabled() && is_predefined_pred(pred)) {
      predefined_predicate(pred, args, path);
      return;
    }
    auto overloads = sig.predicate_overloads(pred);
    if (overloads.empty()) {
      throw TypeError(ErrorKind::UnknownSymbol, path, "predicate " + pred + " is not declared");
    }
    std::vector<PredicateDecl> decls(overloads.begin(), overloads.end());
    resolve(pred, decls, args, path);
  }

  // Exact overload resolution: no subtyping, no coercion. One arity-matching
  // profile must equal the argument types.
  template <class Decl>
  const Decl& resolve(const std::string& name, const std::vector<Decl>& overloads,
                      const std::vector<GeneralType>& args, const std::string& path) const {
    bool arity_seen = false;
    const Decl* match = nullptr;
    std::size_t matches = 0;
    for (const auto& decl : overloads) {
      if (decl.params.size() != args.size()) continue;
      arity_seen = true;
      if (decl.params == args) {
        match = &decl;
        ++matches;
      }
    }
    if (!arity_seen) {
      throw TypeError(ErrorKind::ArityMismatch, path,
                      name + " called with " + std::to_string(args.size()) + " arguments");
    }
    if (matches == 0) {
      throw TypeError(ErrorKind::TypeMismatch, path,
                      "no overload of " + name + " matches " + profile_text(args));
    }
    if (matches > 1) {
      throw TypeError(ErrorKind::OverloadAmbiguous, path,
                      "several overloads of " + name + " match " + profile_text(args));
    }
    return *match;
  }

  GeneralType predefined_function(const FunName& fun, const std::vector<GeneralType>& args,
                                  const std::string& path) const {
    if (fun == kSingletonFun) {
      if (args.size() != 1) {
        throw TypeError(ErrorKind::ArityMismatch, path, "singleton takes one argument");
      }
      if (args[0].set) {
        throw TypeError(ErrorKind::TypeMismatch, path,
                        "singleton takes an element, got " + to_text(args[0]));
      }
      return GeneralType::set_of(args[0].element);
    }
    // set union
    if (args.size() != 2) {
      throw TypeError(ErrorKind::ArityMismatch, path, "union takes two arguments");
    }
    if (!args[0].set || !args[1].set || args[0] != args[1]) {
      throw TypeError(ErrorKind::TypeMismatch, path,
                      "union takes two sets of one element type, got " + to_text(args[0]) +
                          " and " + to_text(args[1]));
    }
    return args[0];
  }

  void predefined_predicate(const PredName& pred, const std::vector<GeneralType>& args,
                            const std::string& path) const {
    if (pred == kEqualPred) {
      if (args.size() != 2) {
        throw TypeError(ErrorKind::ArityMismatch, path, "equality takes two arguments");
      }
      if (args[0].set || args[1].set || args[0] != args[1]) {
        throw TypeError(ErrorKind::TypeMismatch, path,
                        "equality compares two elements of one type, got " + to_text(args[0]) +
                            " and " + to_text(args[1]));
      }
      return;
    }
    // membership
    if (args.size() != 2) {
      throw TypeError(ErrorKind::ArityMismatch, path, "membership takes two arguments");
    }
    if (args[0].set || !args[1].set || args[0].element != args[1].element) {
      throw TypeError(ErrorKind::TypeMismatch, path,
                      "membership takes an element and a set over its type, got " +
                          to_text(args[0]) + " and " + to_text(args[1]));
    }
  }
};

}  // namespace

GeneralType infer_query(const Signature& sig, const Context& ctx, const QueryExpr& query) {
  return Inference{sig}.query(query, ctx, "$");
}

std::pair<BaseTypeName, BaseTypeName> check_relation(const Signature& sig, const RelExpr& rel) {
  return Inference{sig}.relation(rel, "$");
}

void check_prop(const Signature& sig, const Context& ctx, const PropExpr& prop) {
  Inference{sig}.prop(prop, ctx, "$");
}

void require_closed(const QueryExpr& query) {
  auto open = free_vars(query);
  if (open.empty()) return;
  std::string names;
  for (const auto& v : open) {
    if (!names.empty()) names += ", ";
    names += v;
  }
  throw TypeError(ErrorKind::UnboundVariable, "$", "query must be closed; free: " + names);
}

}  // namespace qmt
