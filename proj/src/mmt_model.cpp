#include "qmt/mmt_model.hpp"

#include <deque>
#include <set>

#include "qmt/render.hpp"
#include "qmt/sugar.hpp"
#include "qmt/unify.hpp"
#include "qmt/xml.hpp"

namespace qmt::mmt {

namespace {

GeneralType elem_of(const char* base) { return GeneralType::elem(SimpleType::base(base)); }
GeneralType set_of(const char* base) { return GeneralType::set_of(SimpleType::base(base)); }

std::vector<FunctionDecl> subobjat_overloads(const std::string& name) {
  if (!parse_subobjat_name(name)) return {};
  return {FunctionDecl{name, {elem_of(kObjType)}, elem_of(kObjType)}};
}

}  // namespace

bool parse_subobjat_name(const std::string& name, std::size_t* position_out) {
  static const std::string prefix = "subobjat_";
  if (name.rfind(prefix, 0) != 0) return false;
  std::string digits = name.substr(prefix.size());
  if (digits.empty()) return false;
  for (char c : digits) {
    if (c < '0' || c > '9') return false;
  }
  if (digits.size() > 1 && digits[0] == '0') return false;
  if (digits.size() > 9) return false;  // positions beyond any real arity
  if (position_out) *position_out = static_cast<std::size_t>(std::stoull(digits));
  return true;
}

std::string subobjat_name(std::size_t position) {
  return "subobjat_" + std::to_string(position);
}

Signature mmt_signature() {
  std::vector<SignatureDecl> decls;
  decls.push_back(BaseTypeDecl{kUriType});
  decls.push_back(BaseTypeDecl{kObjType});
  decls.push_back(BaseTypeDecl{kXmlType});

  decls.push_back(ConceptDecl{"theory", kUriType});
  decls.push_back(ConceptDecl{"view", kUriType});
  decls.push_back(ConceptDecl{"constant", kUriType});
  decls.push_back(ConceptDecl{"style", kUriType});

  decls.push_back(RelationDecl{"includes", kUriType, kUriType});
  decls.push_back(RelationDecl{"declares", kUriType, kUriType});
  decls.push_back(RelationDecl{"domain", kUriType, kUriType});
  decls.push_back(RelationDecl{"codomain", kUriType, kUriType});

  decls.push_back(FunctionDecl{"typeOF", {elem_of(kUriType)}, elem_of(kObjType)});
  decls.push_back(FunctionDecl{"defOF", {elem_of(kUriType)}, elem_of(kObjType)});
  decls.push_back(
      FunctionDecl{"typeof", {elem_of(kUriType), elem_of(kObjType)}, elem_of(kObjType)});
  decls.push_back(
      FunctionDecl{"subobjhead", {elem_of(kObjType), elem_of(kUriType)}, set_of(kObjType)});
  decls.push_back(FunctionDecl{
      "unify",
      {elem_of(kObjType)},
      GeneralType::set_of(SimpleType{{kUriType, kObjType, kObjType}})});
  decls.push_back(
      FunctionDecl{"render", {elem_of(kUriType), elem_of(kUriType)}, elem_of(kXmlType)});
  decls.push_back(
      FunctionDecl{"render", {elem_of(kObjType), elem_of(kUriType)}, elem_of(kXmlType)});

  decls.push_back(PredicateDecl{"occurs", {elem_of(kUriType), elem_of(kObjType)}});

  Signature sig = Signature::unchecked(std::move(decls));
  sig.set_function_family(subobjat_overloads);
  sig.enable_predefined();
  return sig;
}

FactSet extract_facts(const Library& library) {
  FactSet facts;
  auto uri_value = [](const Uri& u) { return Value::uri(u.str()); };

  for (const auto& t : library.theories()) {
    facts.concepts.push_back({"theory", uri_value(t.uri)});
    facts.relations.push_back({"includes", uri_value(t.uri), uri_value(t.uri)});
    for (const auto& inc : t.includes) {
      facts.relations.push_back({"includes", uri_value(t.uri), uri_value(inc)});
    }
    for (const auto& c : t.constants) {
      facts.concepts.push_back({"constant", uri_value(c.uri)});
    }
  }

  // declares covers the constants a theory sees through includes, so the
  // plain relation already reflects the module structure.
  for (const auto& t : library.theories()) {
    std::set<std::string> visited{t.uri.str()};
    std::deque<const Theory*> frontier{&t};
    while (!frontier.empty()) {
      const Theory* current = frontier.front();
      frontier.pop_front();
      for (const auto& c : current->constants) {
        facts.relations.push_back({"declares", uri_value(t.uri), uri_value(c.uri)});
      }
      for (const auto& inc : current->includes) {
        if (!visited.insert(inc.str()).second) continue;
        if (const Theory* next = library.find_theory(inc)) frontier.push_back(next);
      }
    }
  }

  for (const auto& v : library.views()) {
    facts.concepts.push_back({"view", uri_value(v.uri)});
    facts.relations.push_back({"domain", uri_value(v.uri), uri_value(v.domain)});
    facts.relations.push_back({"codomain", uri_value(v.uri), uri_value(v.codomain)});
  }
  for (const auto& s : library.styles()) {
    facts.concepts.push_back({"style", uri_value(s.uri)});
  }
  return facts;
}

BaseTypeTests mmt_membership(std::shared_ptr<const Library> library) {
  BaseTypeTests tests;
  tests[kUriType] = [library](const Value& v) {
    return v.kind() == Value::Kind::Uri && library->declares(Uri(v.uri_text()));
  };
  tests[kObjType] = [library](const Value& v) {
    if (v.kind() != Value::Kind::Obj) return false;
    std::vector<Uri> symbols;
    collect_symbols(v.obj(), symbols);
    for (const auto& u : symbols) {
      if (!is_reserved_uri(u) && !library->declares(u)) return false;
    }
    return true;
  };
  tests[kXmlType] = [](const Value& v) { return v.kind() == Value::Kind::Xml; };
  return tests;
}

namespace {

std::optional<Object> subobjat(std::size_t p, const Object& wrapped) {
  auto [ctx, body] = split_free(wrapped);
  switch (body.kind()) {
    case Object::Kind::App: {
      if (p == 0) return wrap_free(std::move(ctx), body.head());
      if (p <= body.args().size()) return wrap_free(std::move(ctx), body.args()[p - 1]);
      return std::nullopt;
    }
    case Object::Kind::Bind: {
      if (p == 1) return wrap_free(std::move(ctx), body.binder());
      if (p == 2) {
        ctx.insert(ctx.end(), body.bound_context().begin(), body.bound_context().end());
        return wrap_free(std::move(ctx), body.body());
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;  // atomic
  }
}

[[noreturn]] void undefined(std::string symbol, const std::vector<Value>& args,
                            std::string note) {
  throw UndefinedError(UndefinedInfo{std::move(symbol), args, std::move(note)});
}

}  // namespace

Model make_model(std::shared_ptr<const Library> library, PluginRegistry plugins) {
  Model model;
  model.signature = mmt_signature();
  // The index is built without membership validation: include edges may
  // point at theories outside the library, which is legal for facts even
  // though such URIs are not literal-denotable.
  model.index = build_index(model.signature, extract_facts(*library));
  model.membership = mmt_membership(library);

  auto shared_plugins = std::make_shared<const PluginRegistry>(std::move(plugins));
  auto subterms = std::make_shared<const SubtermIndex>(SubtermIndex::build(*library));

  auto add_fun = [&model](FunctionDecl decl, Model::HostFunction fn) {
    model.functions[decl.name].push_back({std::move(decl), std::move(fn)});
  };

  add_fun({"typeOF", {elem_of(kUriType)}, elem_of(kObjType)},
          [library](const std::vector<Value>& args) {
            const Constant* c = library->find_constant(Uri(args[0].uri_text()));
            if (!c) undefined("typeOF", args, "argument is not a constant");
            if (!c->type) undefined("typeOF", args, "constant has no type component");
            return Value::object(*c->type);
          });

  add_fun({"defOF", {elem_of(kUriType)}, elem_of(kObjType)},
          [library](const std::vector<Value>& args) {
            const Constant* c = library->find_constant(Uri(args[0].uri_text()));
            if (!c) undefined("defOF", args, "argument is not a constant");
            if (!c->def) undefined("defOF", args, "constant has no definiens");
            return Value::object(*c->def);
          });

  add_fun({"typeof", {elem_of(kUriType), elem_of(kObjType)}, elem_of(kObjType)},
          [library, shared_plugins](const std::vector<Value>& args) {
            Uri system(args[0].uri_text());
            const TypeInferencePlugin* plugin = shared_plugins->find(system);
            if (!plugin) {
              undefined("typeof", args,
                        "no type system registered for '" + system.str() + "'");
            }
            auto constant_type = [&library](const Uri& u) -> std::optional<Object> {
              const Constant* c = library->find_constant(u);
              if (c && c->type) return *c->type;
              return std::nullopt;
            };
            auto inferred = plugin->infer(args[1].obj(), constant_type);
            if (!inferred) undefined("typeof", args, "object is ill-typed");
            return Value::object(*inferred);
          });

  add_fun({"subobjhead", {elem_of(kObjType), elem_of(kUriType)}, set_of(kObjType)},
          [](const std::vector<Value>& args) {
            Uri wanted(args[1].uri_text());
            ValueSet out;
            for_each_subobject(args[0].obj(),
                               [&](const Object& sub, const std::vector<BoundVar>& scope) {
                                 auto head = head_symbol(sub);
                                 if (head && *head == wanted) {
                                   out.insert(Value::object(wrap_free(scope, sub)));
                                 }
                               });
            return Value::set(std::move(out));
          });

  add_fun({"unify",
           {elem_of(kObjType)},
           GeneralType::set_of(SimpleType{{kUriType, kObjType, kObjType}})},
          [subterms](const std::vector<Value>& args) {
            ValueSet out;
            for (const auto& hit : unify_against(*subterms, args[0].obj())) {
              out.insert(Value::tuple({Value::uri(hit.location.str()),
                                       Value::object(hit.matched),
                                       Value::object(hit.substitution)}));
            }
            return Value::set(std::move(out));
          });

  add_fun({"render", {elem_of(kUriType), elem_of(kUriType)}, elem_of(kXmlType)},
          [library](const std::vector<Value>& args) {
            auto markup = render_declaration(*library, Uri(args[0].uri_text()),
                                             Uri(args[1].uri_text()));
            if (!markup) undefined("render", args, "unknown style or declaration");
            return Value::xml(xml_serialize(*markup));
          });

  add_fun({"render", {elem_of(kObjType), elem_of(kUriType)}, elem_of(kXmlType)},
          [library](const std::vector<Value>& args) {
            auto markup = render_object(*library, args[0].obj(), Uri(args[1].uri_text()));
            if (!markup) undefined("render", args, "unknown style");
            return Value::xml(xml_serialize(*markup));
          });

  model.predicates["occurs"].push_back(
      {PredicateDecl{"occurs", {elem_of(kUriType), elem_of(kObjType)}},
       [](const std::vector<Value>& args) {
         return occurs_in(Uri(args[0].uri_text()), args[1].obj());
       }});

  model.function_family = [](const FunName& name) -> std::optional<Model::FunEntry> {
    std::size_t position = 0;
    if (!parse_subobjat_name(name, &position)) return std::nullopt;
    Model::HostFunction fn = [position, name](const std::vector<Value>& args) {
      auto picked = subobjat(position, args[0].obj());
      if (!picked) undefined(name, args, "no subobject at that position");
      return Value::object(*picked);
    };
    return Model::FunEntry{FunctionDecl{name, {elem_of(kObjType)}, elem_of(kObjType)}, fn};
  };

  validate_model(model);
  return model;
}

}  // namespace qmt::mmt
