#include "qmt/library.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qmt/errors.hpp"

namespace qmt::mmt {

using nlohmann::json;

namespace {
const std::string kMetaPrefix = "qmt?meta?";
}

const Uri& free_uri() {
  static const Uri uri(kMetaPrefix + "free");
  return uri;
}
const Uri& subst_uri() {
  static const Uri uri(kMetaPrefix + "subst");
  return uri;
}
const Uri& pair_uri() {
  static const Uri uri(kMetaPrefix + "pair");
  return uri;
}
const Uri& arrow_uri() {
  static const Uri uri(kMetaPrefix + "arrow");
  return uri;
}
const Uri& lambda_uri() {
  static const Uri uri(kMetaPrefix + "lambda");
  return uri;
}

bool is_reserved_uri(const Uri& uri) {
  return uri.str().rfind(kMetaPrefix, 0) == 0;
}

bool is_free_wrapper(const Object& object) {
  if (object.kind() != Object::Kind::Bind) return false;
  const Object& b = object.binder();
  return b.kind() == Object::Kind::Sym && b.sym_uri() == free_uri();
}

std::pair<std::vector<BoundVar>, Object> split_free(const Object& object) {
  std::vector<BoundVar> ctx;
  Object body = object;
  while (is_free_wrapper(body)) {
    const auto& inner = body.bound_context();
    ctx.insert(ctx.end(), inner.begin(), inner.end());
    body = body.body();
  }
  return {std::move(ctx), std::move(body)};
}

Object wrap_free(std::vector<BoundVar> ctx, const Object& body) {
  auto [inner_ctx, inner_body] = split_free(body);
  ctx.insert(ctx.end(), inner_ctx.begin(), inner_ctx.end());
  if (ctx.empty()) return inner_body;
  return Object::bind(Object::sym(free_uri()), std::move(ctx), inner_body);
}

const Notation* Style::find_notation(const Uri& symbol) const {
  for (const auto& [uri, notation] : notations) {
    if (uri == symbol) return &notation;
  }
  return nullptr;
}

// --- Library lookup -----------------------------------------------------------

Library Library::from_parts(std::vector<Theory> theories, std::vector<View> views,
                            std::vector<Style> styles) {
  Library lib;
  lib.theories_ = std::move(theories);
  lib.views_ = std::move(views);
  lib.styles_ = std::move(styles);
  lib.index_declarations();
  return lib;
}

void Library::index_declarations() {
  theory_at_.clear();
  view_at_.clear();
  style_at_.clear();
  constant_at_.clear();
  std::map<std::string, std::string> seen;  // uri -> kind, for duplicate reports
  auto claim = [&seen](const Uri& uri, const std::string& kind) {
    if (uri.str().empty()) throw LibraryError("empty URI in " + kind + " declaration");
    if (is_reserved_uri(uri)) {
      throw LibraryError("URI '" + uri.str() + "' is reserved and cannot be declared");
    }
    auto [it, fresh] = seen.emplace(uri.str(), kind);
    if (!fresh) {
      throw LibraryError("duplicate URI '" + uri.str() + "' (" + it->second + " and " +
                         kind + ")");
    }
  };
  for (std::size_t i = 0; i < theories_.size(); ++i) {
    claim(theories_[i].uri, "theory");
    theory_at_[theories_[i].uri.str()] = i;
    for (std::size_t j = 0; j < theories_[i].constants.size(); ++j) {
      claim(theories_[i].constants[j].uri, "constant");
      constant_at_[theories_[i].constants[j].uri.str()] = {i, j};
    }
  }
  for (std::size_t i = 0; i < views_.size(); ++i) {
    claim(views_[i].uri, "view");
    view_at_[views_[i].uri.str()] = i;
  }
  for (std::size_t i = 0; i < styles_.size(); ++i) {
    claim(styles_[i].uri, "style");
    style_at_[styles_[i].uri.str()] = i;
  }
}

const Theory* Library::find_theory(const Uri& uri) const {
  auto it = theory_at_.find(uri.str());
  return it == theory_at_.end() ? nullptr : &theories_[it->second];
}
const View* Library::find_view(const Uri& uri) const {
  auto it = view_at_.find(uri.str());
  return it == view_at_.end() ? nullptr : &views_[it->second];
}
const Style* Library::find_style(const Uri& uri) const {
  auto it = style_at_.find(uri.str());
  return it == style_at_.end() ? nullptr : &styles_[it->second];
}
const Constant* Library::find_constant(const Uri& uri) const {
  auto it = constant_at_.find(uri.str());
  if (it == constant_at_.end()) return nullptr;
  return &theories_[it->second.first].constants[it->second.second];
}
const Theory* Library::constant_owner(const Uri& uri) const {
  auto it = constant_at_.find(uri.str());
  return it == constant_at_.end() ? nullptr : &theories_[it->second.first];
}
bool Library::declares(const Uri& uri) const {
  const std::string& t = uri.str();
  return theory_at_.count(t) || view_at_.count(t) || style_at_.count(t) ||
         constant_at_.count(t);
}

std::size_t Library::declaration_count() const {
  std::size_t n = theories_.size() + views_.size() + styles_.size();
  for (const auto& t : theories_) n += t.constants.size();
  return n;
}

std::vector<std::string> Library::dangling_references() const {
  std::vector<std::string> notes;
  for (const auto& t : theories_) {
    for (const auto& inc : t.includes) {
      if (!find_theory(inc)) {
        notes.push_back("theory '" + t.uri.str() + "' includes undeclared theory '" +
                        inc.str() + "'");
      }
    }
    for (const auto& c : t.constants) {
      if (c.uri.str().rfind(t.uri.str() + "?", 0) != 0) {
        notes.push_back("constant '" + c.uri.str() + "' is not qualified by its theory '" +
                        t.uri.str() + "'");
      }
    }
  }
  for (const auto& v : views_) {
    if (!find_theory(v.domain)) {
      notes.push_back("view '" + v.uri.str() + "' has undeclared domain '" +
                      v.domain.str() + "'");
    }
    if (!find_theory(v.codomain)) {
      notes.push_back("view '" + v.uri.str() + "' has undeclared codomain '" +
                      v.codomain.str() + "'");
    }
  }
  return notes;
}

// --- JSON codec -----------------------------------------------------------------

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& message) {
  throw LibraryError(path + ": " + message);
}

std::string str_field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) bad(path, std::string("missing string '") + key + "'");
  return it->get<std::string>();
}

Object term_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) {
    bad(path, "a term must be an object with exactly one of OMS/OMV/OMA/OMBIND/OMLIT");
  }
  const auto& [key, val] = *j.items().begin();
  if (key == "OMS") {
    if (!val.is_string()) bad(path, "OMS takes a URI string");
    return Object::sym(Uri(val.get<std::string>()));
  }
  if (key == "OMV") {
    if (!val.is_string() || val.get<std::string>().empty()) {
      bad(path, "OMV takes a nonempty name string");
    }
    return Object::var(val.get<std::string>());
  }
  if (key == "OMA") {
    if (!val.is_array() || val.size() < 2) {
      bad(path, "OMA takes an array [head, arg, ...] with at least one argument");
    }
    Object head = term_from_json(val[0], path + ".OMA[0]");
    std::vector<Object> args;
    for (std::size_t i = 1; i < val.size(); ++i) {
      args.push_back(term_from_json(val[i], path + ".OMA[" + std::to_string(i) + "]"));
    }
    return Object::app(head, std::move(args));
  }
  if (key == "OMBIND") {
    if (!val.is_object()) bad(path, "OMBIND takes an object {binder, ctx, body}");
    auto binder_it = val.find("binder");
    auto ctx_it = val.find("ctx");
    auto body_it = val.find("body");
    if (binder_it == val.end() || ctx_it == val.end() || body_it == val.end()) {
      bad(path, "OMBIND needs binder, ctx, and body");
    }
    if (!ctx_it->is_array()) bad(path, "OMBIND ctx must be an array");
    Object binder = term_from_json(*binder_it, path + ".OMBIND.binder");
    std::vector<BoundVar> ctx;
    for (std::size_t i = 0; i < ctx_it->size(); ++i) {
      const json& entry = (*ctx_it)[i];
      std::string epath = path + ".OMBIND.ctx[" + std::to_string(i) + "]";
      if (!entry.is_object()) bad(epath, "context entry must be an object");
      BoundVar bv;
      bv.name = str_field(entry, "name", epath);
      if (bv.name.empty()) bad(epath, "context variable name must be nonempty");
      if (auto type_it = entry.find("type"); type_it != entry.end()) {
        bv.type = term_from_json(*type_it, epath + ".type");
      }
      ctx.push_back(std::move(bv));
    }
    Object body = term_from_json(*body_it, path + ".OMBIND.body");
    return Object::bind(binder, std::move(ctx), body);
  }
  if (key == "OMLIT") {
    if (!val.is_object()) bad(path, "OMLIT takes an object {kind, value}");
    std::string kind = str_field(val, "kind", path + ".OMLIT");
    std::string value = str_field(val, "value", path + ".OMLIT");
    if (kind != "integer" && kind != "string") {
      bad(path + ".OMLIT", "literal kind must be 'integer' or 'string'");
    }
    return Object::lit(kind, value);
  }
  bad(path, "unknown term constructor '" + key + "'");
}

json term_to_json(const Object& o) {
  switch (o.kind()) {
    case Object::Kind::Sym:
      return json{{"OMS", o.sym_uri().str()}};
    case Object::Kind::Var:
      return json{{"OMV", o.var_name()}};
    case Object::Kind::App: {
      json arr = json::array();
      arr.push_back(term_to_json(o.head()));
      for (const auto& a : o.args()) arr.push_back(term_to_json(a));
      return json{{"OMA", std::move(arr)}};
    }
    case Object::Kind::Bind: {
      json ctx = json::array();
      for (const auto& bv : o.bound_context()) {
        json entry{{"name", bv.name}};
        if (bv.type) entry["type"] = term_to_json(*bv.type);
        ctx.push_back(std::move(entry));
      }
      return json{{"OMBIND", json{{"binder", term_to_json(o.binder())},
                                  {"ctx", std::move(ctx)},
                                  {"body", term_to_json(o.body())}}}};
    }
    case Object::Kind::Lit:
      return json{{"OMLIT", json{{"kind", o.lit_kind()}, {"value", o.lit_value()}}}};
  }
  throw std::logic_error("term_to_json: bad kind");
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover line/column from the byte offset for a uniform error surface.
    int line = 1, col = 1;
    std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("json: ") + e.what(), line, col);
  }
}

Notation notation_from_json(const json& j, const std::string& path) {
  Notation n;
  n.symbol = str_field(j, "symbol", path);
  std::string fixity = str_field(j, "fixity", path);
  if (fixity == "prefix") {
    n.fixity = Notation::Fixity::Prefix;
  } else if (fixity == "infix") {
    n.fixity = Notation::Fixity::Infix;
  } else if (fixity == "mixfix") {
    n.fixity = Notation::Fixity::Mixfix;
  } else {
    bad(path, "fixity must be prefix, infix, or mixfix");
  }
  auto prec_it = j.find("precedence");
  if (prec_it == j.end() || !prec_it->is_number_integer()) {
    bad(path, "missing integer 'precedence'");
  }
  n.precedence = prec_it->get<int>();
  if (auto t = j.find("template"); t != j.end()) {
    if (!t->is_string()) bad(path, "'template' must be a string");
    n.template_text = t->get<std::string>();
  }
  if (n.fixity == Notation::Fixity::Mixfix && n.template_text.empty()) {
    bad(path, "mixfix notation needs a 'template'");
  }
  return n;
}

json notation_to_json(const Uri& symbol, const Notation& n) {
  json j{{"for", symbol.str()},
         {"symbol", n.symbol},
         {"precedence", n.precedence}};
  switch (n.fixity) {
    case Notation::Fixity::Prefix: j["fixity"] = "prefix"; break;
    case Notation::Fixity::Infix: j["fixity"] = "infix"; break;
    case Notation::Fixity::Mixfix: j["fixity"] = "mixfix"; break;
  }
  if (!n.template_text.empty()) j["template"] = n.template_text;
  return j;
}

Library library_from_json(const json& doc) {
  if (!doc.is_object()) throw LibraryError("library document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "theories" && key != "views" && key != "styles") {
      throw LibraryError("unknown top-level key '" + key + "'");
    }
  }
  std::vector<Theory> theories;
  std::vector<View> views;
  std::vector<Style> styles;

  if (auto it = doc.find("theories"); it != doc.end()) {
    if (!it->is_array()) throw LibraryError("'theories' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& jt = (*it)[i];
      std::string path = "theories[" + std::to_string(i) + "]";
      Theory t;
      t.uri = Uri(str_field(jt, "uri", path));
      if (auto inc = jt.find("includes"); inc != jt.end()) {
        if (!inc->is_array()) bad(path, "'includes' must be an array");
        for (const auto& u : *inc) {
          if (!u.is_string()) bad(path, "'includes' entries must be URI strings");
          t.includes.emplace_back(u.get<std::string>());
        }
      }
      if (auto cs = jt.find("constants"); cs != jt.end()) {
        if (!cs->is_array()) bad(path, "'constants' must be an array");
        for (std::size_t k = 0; k < cs->size(); ++k) {
          const json& jc = (*cs)[k];
          std::string cpath = path + ".constants[" + std::to_string(k) + "]";
          Constant c;
          c.uri = Uri(str_field(jc, "uri", cpath));
          if (auto ty = jc.find("type"); ty != jc.end()) {
            c.type = term_from_json(*ty, cpath + ".type");
          }
          if (auto df = jc.find("def"); df != jc.end()) {
            c.def = term_from_json(*df, cpath + ".def");
          }
          t.constants.push_back(std::move(c));
        }
      }
      theories.push_back(std::move(t));
    }
  }

  if (auto it = doc.find("views"); it != doc.end()) {
    if (!it->is_array()) throw LibraryError("'views' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& jv = (*it)[i];
      std::string path = "views[" + std::to_string(i) + "]";
      View v;
      v.uri = Uri(str_field(jv, "uri", path));
      v.domain = Uri(str_field(jv, "domain", path));
      v.codomain = Uri(str_field(jv, "codomain", path));
      if (auto as = jv.find("assignments"); as != jv.end()) {
        if (!as->is_array()) bad(path, "'assignments' must be an array");
        for (std::size_t k = 0; k < as->size(); ++k) {
          const json& ja = (*as)[k];
          std::string apath = path + ".assignments[" + std::to_string(k) + "]";
          Uri target(str_field(ja, "for", apath));
          auto term_it = ja.find("target");
          if (term_it == ja.end()) bad(apath, "missing 'target' term");
          v.assignments.emplace_back(std::move(target),
                                     term_from_json(*term_it, apath + ".target"));
        }
      }
      views.push_back(std::move(v));
    }
  }

  if (auto it = doc.find("styles"); it != doc.end()) {
    if (!it->is_array()) throw LibraryError("'styles' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& js = (*it)[i];
      std::string path = "styles[" + std::to_string(i) + "]";
      Style s;
      s.uri = Uri(str_field(js, "uri", path));
      if (auto ns = js.find("notations"); ns != js.end()) {
        if (!ns->is_array()) bad(path, "'notations' must be an array");
        for (std::size_t k = 0; k < ns->size(); ++k) {
          const json& jn = (*ns)[k];
          std::string npath = path + ".notations[" + std::to_string(k) + "]";
          Uri symbol(str_field(jn, "for", npath));
          for (const auto& [existing, _] : s.notations) {
            if (existing == symbol) bad(npath, "duplicate notation for '" + symbol.str() + "'");
          }
          s.notations.emplace_back(std::move(symbol), notation_from_json(jn, npath));
        }
      }
      styles.push_back(std::move(s));
    }
  }

  return Library::from_parts(std::move(theories), std::move(views), std::move(styles));
}

json library_to_json(const Library& lib) {
  json doc;
  doc["theories"] = json::array();
  for (const auto& t : lib.theories()) {
    json jt{{"uri", t.uri.str()}};
    jt["includes"] = json::array();
    for (const auto& inc : t.includes) jt["includes"].push_back(inc.str());
    jt["constants"] = json::array();
    for (const auto& c : t.constants) {
      json jc{{"uri", c.uri.str()}};
      if (c.type) jc["type"] = term_to_json(*c.type);
      if (c.def) jc["def"] = term_to_json(*c.def);
      jt["constants"].push_back(std::move(jc));
    }
    doc["theories"].push_back(std::move(jt));
  }
  doc["views"] = json::array();
  for (const auto& v : lib.views()) {
    json jv{{"uri", v.uri.str()},
            {"domain", v.domain.str()},
            {"codomain", v.codomain.str()}};
    jv["assignments"] = json::array();
    for (const auto& [target, term] : v.assignments) {
      jv["assignments"].push_back(json{{"for", target.str()}, {"target", term_to_json(term)}});
    }
    doc["views"].push_back(std::move(jv));
  }
  doc["styles"] = json::array();
  for (const auto& s : lib.styles()) {
    json js{{"uri", s.uri.str()}};
    js["notations"] = json::array();
    for (const auto& [symbol, notation] : s.notations) {
      js["notations"].push_back(notation_to_json(symbol, notation));
    }
    doc["styles"].push_back(std::move(js));
  }
  return doc;
}

}  // namespace

Object object_from_json_text(const std::string& term_json) {
  return term_from_json(parse_document(term_json), "$");
}

std::string object_to_json_text(const Object& object) {
  return term_to_json(object).dump();
}

Library library_from_json_text(const std::string& document) {
  return library_from_json(parse_document(document));
}

std::string library_to_json_text(const Library& library, int indent) {
  return library_to_json(library).dump(indent);
}

Library load_library(const std::string& path, std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  auto read_file = [](const fs::path& p) -> std::string {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw LibraryError("cannot open '" + p.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  Library result;
  fs::path root(path);
  if (fs::is_directory(root)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<Library> parts;
    parts.reserve(files.size());
    for (const auto& f : files) {
      try {
        parts.push_back(library_from_json_text(read_file(f)));
      } catch (const LibraryError& e) {
        throw LibraryError(f.string() + ": " + e.what());
      }
    }
    result = merge_libraries(parts);
  } else if (fs::exists(root)) {
    result = library_from_json_text(read_file(root));
  } else {
    throw LibraryError("no such file or directory: '" + path + "'");
  }

  if (warnings) {
    auto notes = result.dangling_references();
    warnings->insert(warnings->end(), notes.begin(), notes.end());
  }
  return result;
}

Library merge_libraries(const std::vector<Library>& libraries) {
  std::vector<Theory> theories;
  std::vector<View> views;
  std::vector<Style> styles;
  for (const auto& lib : libraries) {
    theories.insert(theories.end(), lib.theories().begin(), lib.theories().end());
    views.insert(views.end(), lib.views().begin(), lib.views().end());
    styles.insert(styles.end(), lib.styles().begin(), lib.styles().end());
  }
  return Library::from_parts(std::move(theories), std::move(views), std::move(styles));
}

std::uint64_t content_hash(const Library& library) {
  const std::string text = library_to_json_text(library);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64-bit
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace qmt::mmt
