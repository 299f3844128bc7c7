#include "qmt/object.hpp"

#include <cassert>
#include <stdexcept>

namespace qmt {

namespace {

std::size_t first_sep(const std::string& text) {
  return text.find('?');
}

}  // namespace

std::string_view Uri::ns() const {
  auto pos = first_sep(text_);
  return std::string_view(text_).substr(0, pos == std::string::npos ? text_.size() : pos);
}

std::string_view Uri::module_part() const {
  auto pos = first_sep(text_);
  if (pos == std::string::npos) return {};
  auto rest = std::string_view(text_).substr(pos + 1);
  auto pos2 = rest.find('?');
  return pos2 == std::string_view::npos ? rest : rest.substr(0, pos2);
}

std::string_view Uri::name_part() const {
  auto pos = first_sep(text_);
  if (pos == std::string::npos) return {};
  auto rest = std::string_view(text_).substr(pos + 1);
  auto pos2 = rest.find('?');
  return pos2 == std::string_view::npos ? std::string_view{} : rest.substr(pos2 + 1);
}

Object Object::sym(Uri uri) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Sym;
  node->sym = std::move(uri);
  return Object(std::move(node));
}

Object Object::var(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->name = std::move(name);
  return Object(std::move(node));
}

Object Object::app(Object head, std::vector<Object> arguments) {
  if (arguments.empty()) {
    throw std::invalid_argument("application requires at least one argument");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::App;
  node->parts.reserve(arguments.size() + 1);
  node->parts.push_back(std::move(head));
  for (auto& a : arguments) node->parts.push_back(std::move(a));
  return Object(std::move(node));
}

Object Object::bind(Object binder, std::vector<BoundVar> context, Object body) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Bind;
  node->parts.push_back(std::move(binder));
  node->parts.push_back(std::move(body));
  node->context = std::move(context);
  return Object(std::move(node));
}

Object Object::lit(std::string kind, std::string value) {
  if (kind != "integer" && kind != "string") {
    throw std::invalid_argument("literal kind must be integer or string");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Lit;
  node->lit_kind = std::move(kind);
  node->lit_value = std::move(value);
  return Object(std::move(node));
}

Object::Kind Object::kind() const { return node_->kind; }

const Uri& Object::sym_uri() const {
  assert(node_->kind == Kind::Sym);
  return node_->sym;
}

const std::string& Object::var_name() const {
  assert(node_->kind == Kind::Var);
  return node_->name;
}

const Object& Object::head() const {
  assert(node_->kind == Kind::App);
  return node_->parts.front();
}

std::span<const Object> Object::args() const {
  assert(node_->kind == Kind::App);
  return std::span<const Object>(node_->parts).subspan(1);
}

const Object& Object::binder() const {
  assert(node_->kind == Kind::Bind);
  return node_->parts[0];
}

std::span<const BoundVar> Object::bound_context() const {
  assert(node_->kind == Kind::Bind);
  return node_->context;
}

const Object& Object::body() const {
  assert(node_->kind == Kind::Bind);
  return node_->parts[1];
}

const std::string& Object::lit_kind() const {
  assert(node_->kind == Kind::Lit);
  return node_->lit_kind;
}

const std::string& Object::lit_value() const {
  assert(node_->kind == Kind::Lit);
  return node_->lit_value;
}

namespace {

void append_delimited(std::string& out, char tag, std::string_view payload) {
  out += tag;
  out += std::to_string(payload.size());
  out += ':';
  out += payload;
}

// Bound variables serialize as their distance from the innermost binding;
// context entries of one binder count as consecutive bindings. Context types
// are scoped under the entries before them.
void key_rec(const Object& obj, std::vector<const std::string*>& env, std::string& out) {
  switch (obj.kind()) {
    case Object::Kind::Sym:
      append_delimited(out, 'S', obj.sym_uri().str());
      return;
    case Object::Kind::Var: {
      const std::string& name = obj.var_name();
      for (std::size_t i = env.size(); i-- > 0;) {
        if (*env[i] == name) {
          out += 'B';
          out += std::to_string(env.size() - 1 - i);
          return;
        }
      }
      append_delimited(out, 'F', name);
      return;
    }
    case Object::Kind::App:
      out += "A(";
      key_rec(obj.head(), env, out);
      for (const auto& a : obj.args()) key_rec(a, env, out);
      out += ')';
      return;
    case Object::Kind::Bind: {
      out += "b(";
      key_rec(obj.binder(), env, out);
      out += '|';
      std::size_t depth = env.size();
      for (const auto& entry : obj.bound_context()) {
        if (entry.type) {
          key_rec(*entry.type, env, out);
        } else {
          out += '_';
        }
        out += ';';
        env.push_back(&entry.name);
      }
      out += '|';
      key_rec(obj.body(), env, out);
      out += ')';
      env.resize(depth);
      return;
    }
    case Object::Kind::Lit:
      append_delimited(out, 'L', obj.lit_kind());
      append_delimited(out, 'l', obj.lit_value());
      return;
  }
}

}  // namespace

std::string alpha_key(const Object& obj) {
  std::string out;
  std::vector<const std::string*> env;
  key_rec(obj, env, out);
  return out;
}

bool alpha_equal(const Object& a, const Object& b) {
  return alpha_key(a) == alpha_key(b);
}

bool occurs_in(const Uri& symbol, const Object& obj) {
  switch (obj.kind()) {
    case Object::Kind::Sym:
      return obj.sym_uri() == symbol;
    case Object::Kind::Var:
    case Object::Kind::Lit:
      return false;
    case Object::Kind::App:
      if (occurs_in(symbol, obj.head())) return true;
      for (const auto& a : obj.args()) {
        if (occurs_in(symbol, a)) return true;
      }
      return false;
    case Object::Kind::Bind:
      if (occurs_in(symbol, obj.binder())) return true;
      for (const auto& entry : obj.bound_context()) {
        if (entry.type && occurs_in(symbol, *entry.type)) return true;
      }
      return occurs_in(symbol, obj.body());
  }
  return false;
}

void collect_symbols(const Object& obj, std::vector<Uri>& out) {
  switch (obj.kind()) {
    case Object::Kind::Sym:
      out.push_back(obj.sym_uri());
      return;
    case Object::Kind::Var:
    case Object::Kind::Lit:
      return;
    case Object::Kind::App:
      collect_symbols(obj.head(), out);
      for (const auto& a : obj.args()) collect_symbols(a, out);
      return;
    case Object::Kind::Bind:
      collect_symbols(obj.binder(), out);
      for (const auto& entry : obj.bound_context()) {
        if (entry.type) collect_symbols(*entry.type, out);
      }
      collect_symbols(obj.body(), out);
      return;
  }
}

std::string to_text(const Object& obj) {
  switch (obj.kind()) {
    case Object::Kind::Sym:
      return obj.sym_uri().str();
    case Object::Kind::Var:
      return "$" + obj.var_name();
    case Object::Kind::App: {
      std::string out = to_text(obj.head());
      out += '(';
      bool first = true;
      for (const auto& a : obj.args()) {
        if (!first) out += ", ";
        first = false;
        out += to_text(a);
      }
      out += ')';
      return out;
    }
    case Object::Kind::Bind: {
      std::string out = to_text(obj.binder());
      out += '[';
      bool first = true;
      for (const auto& entry : obj.bound_context()) {
        if (!first) out += ", ";
        first = false;
        out += entry.name;
        if (entry.type) {
          out += ": ";
          out += to_text(*entry.type);
        }
      }
      out += "].";
      out += to_text(obj.body());
      return out;
    }
    case Object::Kind::Lit:
      return obj.lit_kind() + ":" + obj.lit_value();
  }
  return {};
}

}  // namespace qmt
