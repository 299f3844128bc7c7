#include "qmt/query_xml.hpp"

#include <cctype>
#include <stdexcept>
#include <variant>

#include "json.hpp"

#include "qmt/errors.hpp"
#include "qmt/parser.hpp"

namespace qmt {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) { throw ParseError(message, 0, 0); }

const std::string& need_attr(const XmlNode& node, const char* key) {
  const std::string* value = node.find_attr(key);
  if (!value) bad("<" + node.name + "> is missing the '" + std::string(key) + "' attribute");
  return *value;
}

void need_child_count(const XmlNode& node, std::size_t count) {
  if (node.children.size() != count) {
    bad("<" + node.name + "> expects " + std::to_string(count) + " children, found " +
        std::to_string(node.children.size()));
  }
}

std::size_t parse_index(const XmlNode& node, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    bad("<" + node.name + ">: '" + text + "' is not a positive number");
  }
  std::size_t value = std::stoull(text);
  if (value == 0) bad("<" + node.name + ">: positions are 1-based");
  return value;
}

}  // namespace

// ---- terms ------------------------------------------------------------

XmlNode object_to_xml(const Object& object) {
  switch (object.kind()) {
    case Object::Kind::Sym:
      return XmlNode("OMS").attr("uri", object.sym_uri().str());
    case Object::Kind::Var:
      return XmlNode("OMV").attr("name", object.var_name());
    case Object::Kind::App: {
      XmlNode out("OMA");
      out.child(object_to_xml(object.head()));
      for (const Object& arg : object.args()) out.child(object_to_xml(arg));
      return out;
    }
    case Object::Kind::Bind: {
      XmlNode out("OMBIND");
      out.child(XmlNode("binder").child(object_to_xml(object.binder())));
      XmlNode ctx("ctx");
      for (const BoundVar& v : object.bound_context()) {
        XmlNode entry("v");
        entry.attr("name", v.name);
        if (v.type) entry.child(object_to_xml(*v.type));
        ctx.child(std::move(entry));
      }
      out.child(std::move(ctx));
      out.child(XmlNode("body").child(object_to_xml(object.body())));
      return out;
    }
    case Object::Kind::Lit:
      return XmlNode("OMLIT").attr("kind", object.lit_kind()).attr("value", object.lit_value());
  }
  throw std::logic_error("unreachable object kind");
}

Object object_from_xml(const XmlNode& element) {
  if (element.name == "OMS") return Object::sym(Uri(need_attr(element, "uri")));
  if (element.name == "OMV") return Object::var(need_attr(element, "name"));
  if (element.name == "OMA") {
    if (element.children.size() < 2) bad("<OMA> expects a head and at least one argument");
    Object head = object_from_xml(element.children[0]);
    std::vector<Object> args;
    for (std::size_t i = 1; i < element.children.size(); ++i) {
      args.push_back(object_from_xml(element.children[i]));
    }
    return Object::app(std::move(head), std::move(args));
  }
  if (element.name == "OMBIND") {
    const XmlNode* binder = element.find_child("binder");
    const XmlNode* ctx = element.find_child("ctx");
    const XmlNode* body = element.find_child("body");
    if (!binder || !ctx || !body) bad("<OMBIND> expects <binder>, <ctx>, and <body> children");
    need_child_count(*binder, 1);
    need_child_count(*body, 1);
    std::vector<BoundVar> bound;
    for (const XmlNode& v : ctx->children) {
      if (v.name != "v") bad("<ctx> children must be <v> elements");
      if (v.children.size() > 1) bad("<v> carries at most one type child");
      BoundVar entry{need_attr(v, "name"), std::nullopt};
      if (!v.children.empty()) entry.type = object_from_xml(v.children[0]);
      bound.push_back(std::move(entry));
    }
    return Object::bind(object_from_xml(binder->children[0]), std::move(bound),
                        object_from_xml(body->children[0]));
  }
  if (element.name == "OMLIT") {
    const std::string& kind = need_attr(element, "kind");
    if (kind != "integer" && kind != "string") bad("<OMLIT> kind must be integer or string");
    return Object::lit(kind, need_attr(element, "value"));
  }
  bad("unknown term element <" + element.name + ">");
}

// ---- relation expressions ----------------------------------------------

XmlNode rel_to_xml(const RelExpr& rel) {
  return std::visit(
      [](const auto& node) -> XmlNode {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RelAtom>) {
          return XmlNode("rel").attr("name", node.name);
        } else if constexpr (std::is_same_v<T, RelInverse>) {
          return XmlNode("rel").attr("op", "inverse").child(rel_to_xml(node.sub));
        } else if constexpr (std::is_same_v<T, RelClosure>) {
          return XmlNode("rel").attr("op", "closure").child(rel_to_xml(node.sub));
        } else {
          const char* op = std::is_same_v<T, RelCompose>     ? "compose"
                           : std::is_same_v<T, RelUnion>     ? "union"
                           : std::is_same_v<T, RelIntersect> ? "intersect"
                                                             : "diff";
          return XmlNode("rel").attr("op", op).child(rel_to_xml(node.left)).child(
              rel_to_xml(node.right));
        }
      },
      rel.node());
}

RelExpr rel_from_xml(const XmlNode& element) {
  if (element.name != "rel") bad("expected a <rel> element, found <" + element.name + ">");
  if (const std::string* name = element.find_attr("name")) {
    need_child_count(element, 0);
    return RelExpr::atom(*name);
  }
  const std::string& op = need_attr(element, "op");
  if (op == "inverse" || op == "closure") {
    need_child_count(element, 1);
    RelExpr sub = rel_from_xml(element.children[0]);
    return op == "inverse" ? RelExpr::inverse(sub) : RelExpr::closure(sub);
  }
  need_child_count(element, 2);
  RelExpr left = rel_from_xml(element.children[0]);
  RelExpr right = rel_from_xml(element.children[1]);
  if (op == "compose") return RelExpr::compose(left, right);
  if (op == "union") return RelExpr::set_union(left, right);
  if (op == "intersect") return RelExpr::intersect(left, right);
  if (op == "diff") return RelExpr::diff(left, right);
  bad("unknown relation operator '" + op + "'");
}

// ---- queries -------------------------------------------------------------

XmlNode query_to_xml(const QueryExpr& query) {
  return std::visit(
      [](const auto& node) -> XmlNode {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ConceptRef>) {
          return XmlNode("concept").attr("name", node.name);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return XmlNode("var").attr("name", node.name);
        } else if constexpr (std::is_same_v<T, FunApp>) {
          XmlNode out("apply");
          out.attr("fun", node.fun);
          for (const QueryExpr& arg : node.args) out.child(query_to_xml(arg));
          return out;
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          XmlNode out("tuple");
          for (const QueryExpr& item : node.items) out.child(query_to_xml(item));
          return out;
        } else if constexpr (std::is_same_v<T, Projection>) {
          return XmlNode("proj")
              .attr("i", std::to_string(node.index))
              .child(query_to_xml(node.tuple));
        } else if constexpr (std::is_same_v<T, RelImage>) {
          return XmlNode("image").child(rel_to_xml(node.rel)).child(query_to_xml(node.arg));
        } else if constexpr (std::is_same_v<T, BigUnion>) {
          return XmlNode("bigunion")
              .attr("var", node.var)
              .child(query_to_xml(node.domain))
              .child(query_to_xml(node.body));
        } else if constexpr (std::is_same_v<T, Comprehension>) {
          return XmlNode("comprehension")
              .attr("var", node.var)
              .child(query_to_xml(node.domain))
              .child(prop_to_xml(node.filter));
        } else {
          XmlNode out("literal");
          out.attr("type", node.base_type);
          if (node.base_type == "uri" && node.value.kind() == Value::Kind::Uri) {
            out.attr("value", node.value.uri_text());
          } else if (node.base_type == "xml" && node.value.kind() == Value::Kind::Xml) {
            out.attr("value", node.value.xml_text());
          } else if (node.base_type == "obj" && node.value.kind() == Value::Kind::Obj) {
            out.child(object_to_xml(node.value.obj()));
          } else {
            throw std::invalid_argument("literal of base type '" + node.base_type +
                                        "' has no XML form");
          }
          return out;
        }
      },
      query.node());
}

QueryExpr query_from_xml(const XmlNode& element) {
  if (element.name == "concept") return QueryExpr::concept_ref(need_attr(element, "name"));
  if (element.name == "var") return QueryExpr::var(need_attr(element, "name"));
  if (element.name == "apply") {
    std::vector<QueryExpr> args;
    for (const XmlNode& child : element.children) args.push_back(query_from_xml(child));
    return QueryExpr::apply(need_attr(element, "fun"), std::move(args));
  }
  if (element.name == "tuple") {
    if (element.children.size() < 2) bad("<tuple> expects at least two children");
    std::vector<QueryExpr> items;
    for (const XmlNode& child : element.children) items.push_back(query_from_xml(child));
    return QueryExpr::tuple(std::move(items));
  }
  if (element.name == "proj") {
    need_child_count(element, 1);
    return QueryExpr::proj(query_from_xml(element.children[0]),
                           parse_index(element, need_attr(element, "i")));
  }
  if (element.name == "image") {
    need_child_count(element, 2);
    return QueryExpr::rel_image(rel_from_xml(element.children[0]),
                                query_from_xml(element.children[1]));
  }
  if (element.name == "bigunion") {
    need_child_count(element, 2);
    return QueryExpr::big_union(need_attr(element, "var"), query_from_xml(element.children[0]),
                                query_from_xml(element.children[1]));
  }
  if (element.name == "comprehension") {
    need_child_count(element, 2);
    return QueryExpr::comprehension(need_attr(element, "var"),
                                    query_from_xml(element.children[0]),
                                    prop_from_xml(element.children[1]));
  }
  if (element.name == "literal") {
    const std::string& type = need_attr(element, "type");
    if (type == "uri") return QueryExpr::literal(Value::uri(need_attr(element, "value")), type);
    if (type == "xml") return QueryExpr::literal(Value::xml(need_attr(element, "value")), type);
    if (type == "obj") {
      need_child_count(element, 1);
      return QueryExpr::literal(Value::object(object_from_xml(element.children[0])), type);
    }
    bad("<literal> type must be uri, obj, or xml");
  }
  bad("unknown query element <" + element.name + ">");
}

// ---- propositions ----------------------------------------------------------

XmlNode prop_to_xml(const PropExpr& prop) {
  return std::visit(
      [](const auto& node) -> XmlNode {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PredApp>) {
          XmlNode out("prop");
          out.attr("op", "pred").attr("name", node.pred);
          for (const QueryExpr& arg : node.args) out.child(query_to_xml(arg));
          return out;
        } else if constexpr (std::is_same_v<T, PropNot>) {
          return XmlNode("prop").attr("op", "not").child(prop_to_xml(node.sub));
        } else if constexpr (std::is_same_v<T, PropAnd>) {
          return XmlNode("prop").attr("op", "and").child(prop_to_xml(node.left)).child(
              prop_to_xml(node.right));
        } else {
          return XmlNode("prop")
              .attr("op", "forall")
              .attr("var", node.var)
              .child(query_to_xml(node.domain))
              .child(prop_to_xml(node.body));
        }
      },
      prop.node());
}

PropExpr prop_from_xml(const XmlNode& element) {
  if (element.name != "prop") bad("expected a <prop> element, found <" + element.name + ">");
  const std::string& op = need_attr(element, "op");
  if (op == "pred") {
    std::vector<QueryExpr> args;
    for (const XmlNode& child : element.children) args.push_back(query_from_xml(child));
    return PropExpr::pred(need_attr(element, "name"), std::move(args));
  }
  if (op == "not") {
    need_child_count(element, 1);
    return PropExpr::negate(prop_from_xml(element.children[0]));
  }
  if (op == "and") {
    need_child_count(element, 2);
    return PropExpr::conj(prop_from_xml(element.children[0]), prop_from_xml(element.children[1]));
  }
  if (op == "forall") {
    need_child_count(element, 2);
    return PropExpr::forall_in(need_attr(element, "var"), query_from_xml(element.children[0]),
                               prop_from_xml(element.children[1]));
  }
  bad("unknown proposition operator '" + op + "'");
}

// ---- types and signatures ---------------------------------------------------

namespace {

std::string trimmed(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

SimpleType simple_type_from_text(const std::string& raw) {
  std::string text = trimmed(raw);
  std::vector<BaseTypeName> components;
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') bad("unbalanced parentheses in type '" + raw + "'");
    std::string inner = text.substr(1, text.size() - 2);
    std::size_t start = 0;
    while (start <= inner.size()) {
      std::size_t comma = inner.find(',', start);
      std::string piece = trimmed(comma == std::string::npos ? inner.substr(start)
                                                             : inner.substr(start, comma - start));
      if (piece.empty()) bad("empty component in type '" + raw + "'");
      components.push_back(std::move(piece));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (components.size() < 2) bad("product types need at least two components: '" + raw + "'");
  } else {
    if (text.empty()) bad("empty type");
    if (text.find(',') != std::string::npos) {
      bad("product types must be parenthesized: '" + raw + "'");
    }
    components.push_back(text);
  }
  return SimpleType{std::move(components)};
}

}  // namespace

GeneralType general_type_from_text(const std::string& text) {
  std::string body = trimmed(text);
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') bad("unbalanced braces in type '" + text + "'");
    return GeneralType::set_of(simple_type_from_text(body.substr(1, body.size() - 2)));
  }
  return GeneralType::elem(simple_type_from_text(body));
}

namespace {

XmlNode decl_to_xml(const SignatureDecl& decl) {
  return std::visit(
      [](const auto& d) -> XmlNode {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BaseTypeDecl>) {
          return XmlNode("base").attr("name", d.name);
        } else if constexpr (std::is_same_v<T, ConceptDecl>) {
          return XmlNode("concept").attr("name", d.name).attr("type", d.member_type);
        } else if constexpr (std::is_same_v<T, RelationDecl>) {
          return XmlNode("relation").attr("name", d.name).attr("source", d.source).attr(
              "target", d.target);
        } else if constexpr (std::is_same_v<T, FunctionDecl>) {
          XmlNode out("function");
          out.attr("name", d.name).attr("result", to_text(d.result));
          for (const GeneralType& param : d.params) {
            out.child(XmlNode("param").attr("type", to_text(param)));
          }
          return out;
        } else {
          XmlNode out("predicate");
          out.attr("name", d.name);
          for (const GeneralType& param : d.params) {
            out.child(XmlNode("param").attr("type", to_text(param)));
          }
          return out;
        }
      },
      decl);
}

std::vector<GeneralType> params_from_xml(const XmlNode& element) {
  std::vector<GeneralType> params;
  for (const XmlNode& child : element.children) {
    if (child.name != "param") bad("<" + element.name + "> children must be <param> elements");
    params.push_back(general_type_from_text(need_attr(child, "type")));
  }
  return params;
}

}  // namespace

XmlNode signature_to_xml(const Signature& sig) {
  XmlNode out("signature");
  for (const SignatureDecl& decl : sig.decls()) out.child(decl_to_xml(decl));
  return out;
}

std::vector<SignatureDecl> declarations_from_xml(const XmlNode& parent) {
  std::vector<SignatureDecl> out;
  for (const XmlNode& child : parent.children) {
    if (child.name == "base") {
      out.push_back(BaseTypeDecl{need_attr(child, "name")});
    } else if (child.name == "concept") {
      out.push_back(ConceptDecl{need_attr(child, "name"), need_attr(child, "type")});
    } else if (child.name == "relation") {
      out.push_back(RelationDecl{need_attr(child, "name"), need_attr(child, "source"),
                                 need_attr(child, "target")});
    } else if (child.name == "function") {
      out.push_back(FunctionDecl{need_attr(child, "name"), params_from_xml(child),
                                 general_type_from_text(need_attr(child, "result"))});
    } else if (child.name == "predicate") {
      out.push_back(PredicateDecl{need_attr(child, "name"), params_from_xml(child)});
    } else {
      bad("unknown declaration element <" + child.name + ">");
    }
  }
  return out;
}

// ---- documents -------------------------------------------------------------

QueryDocument query_document_from_xml_text(const std::string& text) {
  XmlNode root = xml_parse(text);
  if (root.name != "query") {
    return QueryDocument{{}, query_from_xml(root), false};
  }
  bool lenient = false;
  if (const std::string* flag = root.find_attr("lenient-filter")) {
    if (*flag != "true" && *flag != "false") {
      bad("lenient-filter must be 'true' or 'false'");
    }
    lenient = *flag == "true";
  }
  std::vector<SignatureDecl> decls;
  const XmlNode* expr = nullptr;
  for (const XmlNode& child : root.children) {
    if (child.name == "declare") {
      decls = declarations_from_xml(child);
    } else if (expr) {
      bad("<query> carries more than one expression element");
    } else {
      expr = &child;
    }
  }
  if (!expr) bad("<query> is missing its expression element");
  return QueryDocument{std::move(decls), query_from_xml(*expr), lenient};
}

std::string query_document_to_xml_text(const QueryDocument& doc, int indent) {
  XmlNode root("query");
  if (doc.lenient_filter) root.attr("lenient-filter", "true");
  if (!doc.declarations.empty()) {
    XmlNode declare("declare");
    for (const SignatureDecl& decl : doc.declarations) declare.child(decl_to_xml(decl));
    root.child(std::move(declare));
  }
  root.child(query_to_xml(doc.query));
  return xml_serialize(root, indent);
}

namespace {

GeneralType general_type_from_json(const json& value) {
  if (!value.is_string()) bad("types in JSON documents are strings");
  return general_type_from_text(value.get<std::string>());
}

std::vector<GeneralType> params_from_json(const json& object) {
  std::vector<GeneralType> params;
  if (!object.contains("params")) return params;
  if (!object["params"].is_array()) bad("'params' must be an array");
  for (const json& param : object["params"]) params.push_back(general_type_from_json(param));
  return params;
}

std::string need_string(const json& object, const char* key) {
  if (!object.contains(key) || !object[key].is_string()) {
    bad(std::string("expected a string '") + key + "' member");
  }
  return object[key].get<std::string>();
}

std::vector<SignatureDecl> declarations_from_json(const json& declare) {
  std::vector<SignatureDecl> out;
  if (!declare.is_object()) bad("'declare' must be an object");
  if (declare.contains("base-types")) {
    for (const json& name : declare["base-types"]) {
      if (!name.is_string()) bad("'base-types' entries must be strings");
      out.push_back(BaseTypeDecl{name.get<std::string>()});
    }
  }
  if (declare.contains("concepts")) {
    for (const json& c : declare["concepts"]) {
      out.push_back(ConceptDecl{need_string(c, "name"), need_string(c, "type")});
    }
  }
  if (declare.contains("relations")) {
    for (const json& r : declare["relations"]) {
      out.push_back(RelationDecl{need_string(r, "name"), need_string(r, "source"),
                                 need_string(r, "target")});
    }
  }
  if (declare.contains("functions")) {
    for (const json& f : declare["functions"]) {
      if (!f.contains("result")) bad("function declarations need a 'result' member");
      out.push_back(
          FunctionDecl{need_string(f, "name"), params_from_json(f),
                       general_type_from_json(f["result"])});
    }
  }
  if (declare.contains("predicates")) {
    for (const json& p : declare["predicates"]) {
      out.push_back(PredicateDecl{need_string(p, "name"), params_from_json(p)});
    }
  }
  return out;
}

Signature extend_for_parsing(const Signature& base, const std::vector<SignatureDecl>& extra) {
  if (extra.empty()) return base;
  std::vector<SignatureDecl> decls = base.decls();
  decls.insert(decls.end(), extra.begin(), extra.end());
  // Parsing only needs concept-name lookup; full signature checking happens
  // once the host decides to evaluate the document.
  Signature sig = Signature::unchecked(std::move(decls));
  if (base.predefined_enabled()) sig.enable_predefined();
  return sig;
}

}  // namespace

QueryDocument query_document_from_json_text(const std::string& text, const Signature& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_string()) {
    return QueryDocument{{}, parse_query(doc.get<std::string>(), base), false};
  }
  if (!doc.is_object()) bad("a JSON query document is an object or a string");
  std::vector<SignatureDecl> decls;
  if (doc.contains("declare")) decls = declarations_from_json(doc["declare"]);
  bool lenient = false;
  if (doc.contains("lenient-filter")) {
    if (!doc["lenient-filter"].is_boolean()) bad("'lenient-filter' must be a boolean");
    lenient = doc["lenient-filter"].get<bool>();
  }
  if (!doc.contains("query")) bad("a JSON query document needs a 'query' member");
  QueryExpr query = [&] {
    const json& q = doc["query"];
    if (!q.is_string()) bad("'query' must hold the textual query as a string");
    return parse_query(q.get<std::string>(), extend_for_parsing(base, decls));
  }();
  return QueryDocument{std::move(decls), std::move(query), lenient};
}

QueryDocument query_document_from_query_text(const std::string& text, const Signature& base) {
  return QueryDocument{{}, parse_query(text, base), false};
}

}  // namespace qmt
