#include "qmt/result.hpp"

#include <stdexcept>

#include "qmt/checker.hpp"
#include "qmt/errors.hpp"
#include "qmt/library.hpp"

namespace qmt {

namespace {

using nlohmann::json;

json object_to_json(const Object& object) {
  return json::parse(mmt::object_to_json_text(object));
}

}  // namespace

json value_to_json(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::Uri:
      return json{{"uri", value.uri_text()}};
    case Value::Kind::Obj:
      return json{{"obj", object_to_json(value.obj())}};
    case Value::Kind::Xml:
      return json{{"xml", value.xml_text()}};
    case Value::Kind::Tuple: {
      json items = json::array();
      for (const Value& component : value.components()) items.push_back(value_to_json(component));
      return json{{"tuple", std::move(items)}};
    }
    case Value::Kind::Set: {
      json items = json::array();
      for (const Value& member : value.members()) items.push_back(value_to_json(member));
      return json{{"set", std::move(items)}};
    }
  }
  throw std::logic_error("unreachable value kind");
}

Value value_from_json(const json& encoded) {
  if (!encoded.is_object() || encoded.size() != 1) {
    throw std::invalid_argument("an encoded value is a single-key object");
  }
  const auto& [key, body] = *encoded.items().begin();
  if (key == "uri") return Value::uri(body.get<std::string>());
  if (key == "xml") return Value::xml(body.get<std::string>());
  if (key == "obj") return Value::object(mmt::object_from_json_text(body.dump()));
  if (key == "tuple") {
    std::vector<Value> components;
    for (const json& item : body) components.push_back(value_from_json(item));
    return Value::tuple(std::move(components));
  }
  if (key == "set") {
    ValueSet members;
    for (const json& item : body) members.insert(value_from_json(item));
    return Value::set(std::move(members));
  }
  throw std::invalid_argument("unknown value key '" + key + "'");
}

XmlNode value_to_xml(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::Uri:
      return XmlNode("uri").attr("value", value.uri_text());
    case Value::Kind::Obj:
      return XmlNode("obj").child(object_to_xml(value.obj()));
    case Value::Kind::Xml:
      try {
        return XmlNode("xml").child(xml_parse(value.xml_text()));
      } catch (const ParseError&) {
        return XmlNode("xml").attr("value", value.xml_text());
      }
    case Value::Kind::Tuple: {
      XmlNode out("tuple");
      for (const Value& component : value.components()) out.child(value_to_xml(component));
      return out;
    }
    case Value::Kind::Set: {
      XmlNode out("set");
      for (const Value& member : value.members()) out.child(value_to_xml(member));
      return out;
    }
  }
  throw std::logic_error("unreachable value kind");
}

ResultDocument ok_result(std::string type_text, Value value) {
  ResultDocument out;
  out.ok = true;
  out.type_text = std::move(type_text);
  out.value = std::move(value);
  return out;
}

ResultDocument error_result(std::string kind, std::string message, std::string type_text) {
  ResultDocument out;
  out.ok = false;
  out.type_text = std::move(type_text);
  out.error_kind = std::move(kind);
  out.error_message = std::move(message);
  return out;
}

namespace {

// Rebuilds the host signature with the document's extra declarations while
// keeping the function-family hook and the built-in symbols.
Signature extended_signature(const Signature& base, const std::vector<SignatureDecl>& extra) {
  std::vector<SignatureDecl> decls = base.decls();
  decls.insert(decls.end(), extra.begin(), extra.end());
  SignatureCheck check = check_signature(std::move(decls));
  if (!check.ok()) {
    std::string message = "signature extension rejected:";
    for (const TypeError& error : check.errors) {
      message += "\n  ";
      message += error.what();
    }
    throw TypeError(check.errors.front().kind(), check.errors.front().path(), message);
  }
  Signature sig = std::move(*check.signature);
  if (base.function_family_hook()) sig.set_function_family(base.function_family_hook());
  if (base.predefined_enabled()) sig.enable_predefined();
  return sig;
}

}  // namespace

ResultDocument run_query_document(const Model& model, const QueryDocument& doc) {
  try {
    const Model* active = &model;
    Model extended;
    if (!doc.declarations.empty()) {
      extended = model;
      extended.signature = extended_signature(model.signature, doc.declarations);
      active = &extended;
    }
    require_closed(doc.query);
    GeneralType type = infer_query(active->signature, Context{}, doc.query);
    std::string type_text = to_text(type);
    EvalOutcome outcome = eval_query(*active, doc.query, EvalOptions{doc.lenient_filter});
    if (outcome.ok()) return ok_result(std::move(type_text), std::move(*outcome.value));
    return error_result("undefined", outcome.undefined->to_text(), std::move(type_text));
  } catch (const TypeError& e) {
    return error_result("type-error", e.what());
  } catch (const CaptureError& e) {
    return error_result("type-error", e.what());
  } catch (const std::exception& e) {
    return error_result("internal-error", e.what());
  }
}

std::string result_to_text(const ResultDocument& result) {
  if (!result.ok) {
    std::string out = "error " + result.error_kind + "\n" + result.error_message + "\n";
    return out;
  }
  std::string out = "ok " + result.type_text + "\n";
  if (result.value->kind() == Value::Kind::Set) {
    for (const Value& member : result.value->members()) out += to_text(member) + "\n";
  } else {
    out += to_text(*result.value) + "\n";
  }
  return out;
}

std::string result_to_xml_text(const ResultDocument& result, int indent) {
  XmlNode root("result");
  if (result.ok) {
    root.attr("outcome", "ok").attr("type", result.type_text);
    root.child(value_to_xml(*result.value));
  } else {
    root.attr("outcome", "error").attr("kind", result.error_kind)
        .attr("message", result.error_message);
    if (!result.type_text.empty()) root.attr("type", result.type_text);
  }
  return xml_serialize(root, indent) + "\n";
}

std::string result_to_json_text(const ResultDocument& result, int indent) {
  json out;
  out["outcome"] = result.ok ? "ok" : "error";
  if (result.ok) {
    out["type"] = result.type_text;
    out["value"] = value_to_json(*result.value);
  } else {
    out["kind"] = result.error_kind;
    out["message"] = result.error_message;
    if (!result.type_text.empty()) out["type"] = result.type_text;
  }
  return out.dump(indent) + "\n";
}

std::size_t result_element_count(const ResultDocument& result) {
  if (!result.ok) return 0;
  if (result.value->kind() == Value::Kind::Set) return result.value->members().size();
  return 1;
}

}  // namespace qmt
