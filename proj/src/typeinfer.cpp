#include "qmt/typeinfer.hpp"

#include <vector>

namespace qmt::mmt {

void PluginRegistry::add(const Uri& theory, std::shared_ptr<const TypeInferencePlugin> plugin) {
  plugins_[theory.str()] = std::move(plugin);
}

const TypeInferencePlugin* PluginRegistry::find(const Uri& theory) const {
  auto it = plugins_.find(theory.str());
  return it == plugins_.end() ? nullptr : it->second.get();
}

PluginRegistry PluginRegistry::with_builtins() {
  PluginRegistry registry;
  registry.add(simply_typed_theory(), simply_typed_plugin());
  return registry;
}

const Uri& simply_typed_theory() {
  static const Uri uri("qmt?stlc");
  return uri;
}

const Uri& integer_type_uri() {
  static const Uri uri("qmt?meta?integer");
  return uri;
}

const Uri& string_type_uri() {
  static const Uri uri("qmt?meta?string");
  return uri;
}

namespace {

bool is_lambda_binder(const Object& binder) {
  return binder.kind() == Object::Kind::Sym && binder.sym_uri() == lambda_uri();
}

bool is_arrow_type(const Object& type) {
  return type.kind() == Object::Kind::App && type.head().kind() == Object::Kind::Sym &&
         type.head().sym_uri() == arrow_uri();
}

// arrow(t1, ..., tn, r) applied to one argument of type t1 leaves
// arrow(t2, ..., tn, r), or r itself once all parameters are consumed.
std::optional<Object> peel_arrow(const Object& fun_type, const Object& arg_type) {
  if (!is_arrow_type(fun_type)) return std::nullopt;
  const auto& parts = fun_type.args();
  if (parts.size() < 2) return std::nullopt;
  if (!alpha_equal(parts.front(), arg_type)) return std::nullopt;
  if (parts.size() == 2) return parts.back();
  std::vector<Object> rest(parts.begin() + 1, parts.end());
  return Object::app(fun_type.head(), std::move(rest));
}

Object make_arrow(const std::vector<Object>& params, const Object& result) {
  if (params.empty()) return result;
  std::vector<Object> parts = params;
  parts.push_back(result);
  return Object::app(Object::sym(arrow_uri()), std::move(parts));
}

class SimplyTyped final : public TypeInferencePlugin {
 public:
  std::optional<Object> infer(const Object& object,
                              const ConstantTypeLookup& constant_type) const override {
    std::vector<BoundVar> env;
    return infer_rec(object, env, constant_type);
  }

 private:
  static const Object* lookup_var(const std::vector<BoundVar>& env, const std::string& name) {
    for (std::size_t i = env.size(); i-- > 0;) {
      if (env[i].name == name) return env[i].type ? &*env[i].type : nullptr;
    }
    return nullptr;
  }

  std::optional<Object> infer_rec(const Object& o, std::vector<BoundVar>& env,
                                  const ConstantTypeLookup& constant_type) const {
    switch (o.kind()) {
      case Object::Kind::Sym:
        return constant_type(o.sym_uri());
      case Object::Kind::Var: {
        const Object* t = lookup_var(env, o.var_name());
        if (!t) return std::nullopt;
        return *t;
      }
      case Object::Kind::Lit:
        return Object::sym(o.lit_kind() == "integer" ? integer_type_uri() : string_type_uri());
      case Object::Kind::App: {
        auto fun_type = infer_rec(o.head(), env, constant_type);
        if (!fun_type) return std::nullopt;
        for (const auto& arg : o.args()) {
          auto arg_type = infer_rec(arg, env, constant_type);
          if (!arg_type) return std::nullopt;
          fun_type = peel_arrow(*fun_type, *arg_type);
          if (!fun_type) return std::nullopt;
        }
        return fun_type;
      }
      case Object::Kind::Bind: {
        if (is_free_wrapper(o)) {
          // The wrapper's context is the typing context of the body.
          std::size_t mark = env.size();
          for (const auto& bv : o.bound_context()) env.push_back(bv);
          auto result = infer_rec(o.body(), env, constant_type);
          env.resize(mark);
          return result;
        }
        if (!is_lambda_binder(o.binder())) return std::nullopt;
        std::vector<Object> param_types;
        for (const auto& bv : o.bound_context()) {
          if (!bv.type) return std::nullopt;  // abstraction needs annotations
          param_types.push_back(*bv.type);
        }
        std::size_t mark = env.size();
        for (const auto& bv : o.bound_context()) env.push_back(bv);
        auto body_type = infer_rec(o.body(), env, constant_type);
        env.resize(mark);
        if (!body_type) return std::nullopt;
        return make_arrow(param_types, *body_type);
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::shared_ptr<const TypeInferencePlugin> simply_typed_plugin() {
  static const auto plugin = std::make_shared<const SimplyTyped>();
  return plugin;
}

}  // namespace qmt::mmt
