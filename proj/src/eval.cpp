#include "qmt/eval.hpp"

#include "qmt/checker.hpp"
#include "qmt/sugar.hpp"

namespace qmt {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

}  // namespace

std::string UndefinedInfo::to_text() const {
  std::string out = symbol;
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += qmt::to_text(args[i]);
    }
    out += ')';
  }
  if (!note.empty()) {
    out += ": " + note;
  }
  return out;
}

void validate_model(const Model& model) {
  for (const auto& decl : model.signature.decls()) {
    if (const auto* f = std::get_if<FunctionDecl>(&decl)) {
      std::size_t hits = 0;
      auto it = model.functions.find(f->name);
      if (it != model.functions.end()) {
        for (const auto& entry : it->second) {
          if (entry.decl.params == f->params) {
            if (!(entry.decl.result == f->result)) {
              throw std::invalid_argument("model entry for " + f->name +
                                          " disagrees with the declared result type");
            }
            ++hits;
          }
        }
      }
      if (hits != 1) {
        throw std::invalid_argument("function " + f->name +
                                    " needs exactly one host entry per declared profile");
      }
    } else if (const auto* p = std::get_if<PredicateDecl>(&decl)) {
      std::size_t hits = 0;
      auto it = model.predicates.find(p->name);
      if (it != model.predicates.end()) {
        for (const auto& entry : it->second) {
          if (entry.decl.params == p->params) ++hits;
        }
      }
      if (hits != 1) {
        throw std::invalid_argument("predicate " + p->name +
                                    " needs exactly one host entry per declared profile");
      }
    }
  }
  for (const auto& [name, entries] : model.functions) {
    for (const auto& entry : entries) {
      bool declared = false;
      for (const auto& decl : model.signature.function_overloads(name)) {
        if (decl.params == entry.decl.params) declared = true;
      }
      if (!declared) {
        throw std::invalid_argument("host function " + name + " is not declared");
      }
    }
  }
  for (const auto& [name, entries] : model.predicates) {
    for (const auto& entry : entries) {
      bool declared = false;
      for (const auto& decl : model.signature.predicate_overloads(name)) {
        if (decl.params == entry.decl.params) declared = true;
      }
      if (!declared) {
        throw std::invalid_argument("host predicate " + name + " is not declared");
      }
    }
  }
}

namespace {

// Denotation walk. Static types are re-derived on the way down (the context
// mirrors the assignment), which keeps overload resolution in lockstep with
// the checker without an annotated tree.
struct Evaluator {
  const Model& model;
  EvalOptions opts;
  ImageMemo memo;

  Value query(const QueryExpr& q, const Context& ctx, const Assignment& env) {
    return std::visit(
        overloaded{
            [&](const ConceptRef& x) {
              return Value::set(model.index.concepts.extent(x.name));
            },
            [&](const VarRef& x) {
              const Value* v = env.lookup(x.name);
              if (!v) throw std::logic_error("assignment misses variable " + x.name);
              return *v;
            },
            [&](const FunApp& x) { return apply(x, ctx, env); },
            [&](const TupleExpr& x) {
              std::vector<Value> parts;
              parts.reserve(x.items.size());
              for (const auto& item : x.items) parts.push_back(query(item, ctx, env));
              return Value::tuple(std::move(parts));
            },
            [&](const Projection& x) {
              Value v = query(x.tuple, ctx, env);
              if (v.kind() != Value::Kind::Tuple || x.index < 1 ||
                  x.index > v.components().size()) {
                throw std::logic_error("projection applied to a non-matching value");
              }
              return v.components()[x.index - 1];
            },
            [&](const RelImage& x) {
              Value v = query(x.arg, ctx, env);
              return Value::set(image(model.index, x.rel, v, &memo));
            },
            [&](const BigUnion& x) {
              GeneralType domain_type = infer_query(model.signature, ctx, x.domain);
              Value domain = query(x.domain, ctx, env);
              Context inner_ctx = ctx.extended(x.var, domain_type.element);
              ValueSet acc;
              for (const auto& element : domain.members()) {
                Value part = query(x.body, inner_ctx, env.extended(x.var, element));
                acc = set_union(acc, part.members());
              }
              return Value::set(std::move(acc));
            },
            [&](const Comprehension& x) {
              GeneralType domain_type = infer_query(model.signature, ctx, x.domain);
              Value domain = query(x.domain, ctx, env);
              Context inner_ctx = ctx.extended(x.var, domain_type.element);
              ValueSet kept;
              for (const auto& element : domain.members()) {
                Assignment inner_env = env.extended(x.var, element);
                bool keep = false;
                if (opts.lenient_filter) {
                  try {
                    keep = prop(x.filter, inner_ctx, inner_env);
                  } catch (const UndefinedError&) {
                    keep = false;
                  }
                } else {
                  keep = prop(x.filter, inner_ctx, inner_env);
                }
                if (keep) kept.insert(element);
              }
              return Value::set(std::move(kept));
            },
            [&](const LiteralExpr& x) {
              auto it = model.membership.find(x.base_type);
              if (it != model.membership.end() && !it->second(x.value)) {
                throw UndefinedError(UndefinedInfo{
                    "literal", {x.value}, "value outside the universe of " + x.base_type});
              }
              return x.value;
            },
        },
        q.node());
  }

  bool prop(const PropExpr& p, const Context& ctx, const Assignment& env) {
    return std::visit(
        overloaded{
            [&](const PredApp& x) { return test(x, ctx, env); },
            [&](const PropNot& x) { return !prop(x.sub, ctx, env); },
            [&](const PropAnd& x) {
              // Definedness does not short-circuit: both sides evaluate.
              bool left = prop(x.left, ctx, env);
              bool right = prop(x.right, ctx, env);
              return left && right;
            },
            [&](const ForallIn& x) {
              GeneralType domain_type = infer_query(model.signature, ctx, x.domain);
              Value domain = query(x.domain, ctx, env);
              Context inner_ctx = ctx.extended(x.var, domain_type.element);
              bool all = true;
              for (const auto& element : domain.members()) {
                Assignment inner_env = env.extended(x.var, element);
                bool holds = false;
                if (opts.lenient_filter) {
                  try {
                    holds = prop(x.body, inner_ctx, inner_env);
                  } catch (const UndefinedError&) {
                    holds = false;
                  }
                } else {
                  holds = prop(x.body, inner_ctx, inner_env);
                }
                all = all && holds;
              }
              return all;
            },
        },
        p.node());
  }

  Value apply(const FunApp& x, const Context& ctx, const Assignment& env) {
    if (model.signature.predefined_enabled() && is_predefined_fun(x.fun)) {
      std::vector<Value> args = eval_args(x.args, ctx, env);
      if (x.fun == kSingletonFun) {
        ValueSet single;
        single.insert(std::move(args[0]));
        return Value::set(std::move(single));
      }
      return Value::set(set_union(args[0].members(), args[1].members()));
    }
    std::vector<GeneralType> arg_types = infer_args(x.args, ctx);
    const Model::FunEntry* entry = find_function(x.fun, arg_types);
    std::optional<Model::FunEntry> family_entry;
    if (!entry && model.function_family) {
      family_entry = model.function_family(x.fun);
      if (family_entry && family_entry->decl.params == arg_types) {
        entry = &*family_entry;
      } else {
        family_entry.reset();
      }
    }
    std::vector<Value> args = eval_args(x.args, ctx, env);
    if (!entry) {
      throw UndefinedError(UndefinedInfo{x.fun, std::move(args), "no interpretation"});
    }
    return entry->fn(args);
  }

  bool test(const PredApp& x, const Context& ctx, const Assignment& env) {
    if (model.signature.predefined_enabled() && is_predefined_pred(x.pred)) {
      std::vector<Value> args = eval_args(x.args, ctx, env);
      if (x.pred == kEqualPred) return args[0] == args[1];
      return args[1].members().contains(args[0]);
    }
    std::vector<GeneralType> arg_types = infer_args(x.args, ctx);
    const Model::PredEntry* entry = find_predicate(x.pred, arg_types);
    std::vector<Value> args = eval_args(x.args, ctx, env);
    if (!entry) {
      throw UndefinedError(UndefinedInfo{x.pred, std::move(args), "no interpretation"});
    }
    return entry->fn(args);
  }

  std::vector<GeneralType> infer_args(const std::vector<QueryExpr>& exprs, const Context& ctx) {
    std::vector<GeneralType> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(infer_query(model.signature, ctx, e));
    return out;
  }

  std::vector<Value> eval_args(const std::vector<QueryExpr>& exprs, const Context& ctx,
                               const Assignment& env) {
    std::vector<Value> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(query(e, ctx, env));
    return out;
  }

  const Model::FunEntry* find_function(const FunName& name,
                                       const std::vector<GeneralType>& arg_types) const {
    auto it = model.functions.find(name);
    if (it == model.functions.end()) return nullptr;
    for (const auto& entry : it->second) {
      if (entry.decl.params == arg_types) return &entry;
    }
    return nullptr;
  }

  const Model::PredEntry* find_predicate(const PredName& name,
                                         const std::vector<GeneralType>& arg_types) const {
    auto it = model.predicates.find(name);
    if (it == model.predicates.end()) return nullptr;
    for (const auto& entry : it->second) {
      if (entry.decl.params == arg_types) return &entry;
    }
    return nullptr;
  }
};

}  // namespace

EvalOutcome eval_query(const Model& model, const QueryExpr& query, const EvalOptions& opts) {
  require_closed(query);
  return eval_query(model, Context{}, Assignment{}, query, opts);
}

EvalOutcome eval_query(const Model& model, const Context& ctx, const Assignment& assignment,
                       const QueryExpr& query, const EvalOptions& opts) {
  infer_query(model.signature, ctx, query);
  Evaluator evaluator{model, opts, {}};
  try {
    return EvalOutcome{evaluator.query(query, ctx, assignment), std::nullopt};
  } catch (const UndefinedError& err) {
    return EvalOutcome{std::nullopt, err.info()};
  }
}

PropOutcome eval_prop(const Model& model, const Context& ctx, const Assignment& assignment,
                      const PropExpr& prop, const EvalOptions& opts) {
  check_prop(model.signature, ctx, prop);
  Evaluator evaluator{model, opts, {}};
  try {
    return PropOutcome{evaluator.prop(prop, ctx, assignment), std::nullopt};
  } catch (const UndefinedError& err) {
    return PropOutcome{std::nullopt, err.info()};
  }
}

}  // namespace qmt
