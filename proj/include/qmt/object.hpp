#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmt {

// Identifier of a library declaration. The canonical text has up to three
// segments separated by '?': namespace, module, name; module and name may be
// absent. Ordering and equality are lexicographic on the full text.
class Uri {
 public:
  Uri() = default;
  explicit Uri(std::string text) : text_(std::move(text)) {}

  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }

  std::string_view ns() const;
  std::string_view module_part() const;
  std::string_view name_part() const;

  auto operator<=>(const Uri&) const = default;

 private:
  std::string text_;
};

struct BoundVar;

// Immutable term tree in the OpenMath style. The five node kinds are symbol
// references, variables, applications (head plus at least one argument),
// binders with a typed variable context, and literals of kind "integer" or
// "string". Copies share the underlying node.
class Object {
 public:
  enum class Kind { Sym, Var, App, Bind, Lit };

  static Object sym(Uri uri);
  static Object var(std::string name);
  static Object app(Object head, std::vector<Object> arguments);
  static Object bind(Object binder, std::vector<BoundVar> context, Object body);
  static Object lit(std::string kind, std::string value);

  Kind kind() const;

  // Accessors abort on kind mismatch; callers dispatch on kind() first.
  const Uri& sym_uri() const;
  const std::string& var_name() const;
  const Object& head() const;
  std::span<const Object> args() const;
  const Object& binder() const;
  std::span<const BoundVar> bound_context() const;
  const Object& body() const;
  const std::string& lit_kind() const;
  const std::string& lit_value() const;

 private:
  struct Node;
  explicit Object(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// One entry of a binder context: a variable name with an optional type term.
struct BoundVar {
  std::string name;
  std::optional<Object> type;
};

struct Object::Node {
  Kind kind;
  Uri sym;                        // Sym
  std::string name;               // Var
  std::vector<Object> parts;      // App: head then args; Bind: binder, body
  std::vector<BoundVar> context;  // Bind
  std::string lit_kind;           // Lit
  std::string lit_value;          // Lit
};

// Serialization that replaces bound variables by binder-relative indices, so
// alpha-equivalent objects produce identical strings. Free variables keep
// their names. Used as the canonical form for hashing and set membership.
std::string alpha_key(const Object& obj);

bool alpha_equal(const Object& a, const Object& b);

// True when the symbol occurs anywhere in the object, including binder
// objects, context types, and literals' enclosing structure.
bool occurs_in(const Uri& symbol, const Object& obj);

// Collects every symbol URI mentioned in the object.
void collect_symbols(const Object& obj, std::vector<Uri>& out);

// Compact single-line rendering for diagnostics, not meant to be parsed back.
std::string to_text(const Object& obj);

}  // namespace qmt
