#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmt/object.hpp"

namespace qmt::mmt {

// Reserved identifiers in the `qmt?meta` module. They never name library
// declarations; loaders reject attempts to declare them.
const Uri& free_uri();    // binder that closes an object over its free variables
const Uri& subst_uri();   // head of an encoded substitution
const Uri& pair_uri();    // head of one binding inside an encoded substitution
const Uri& arrow_uri();   // function type former of the built-in type system
const Uri& lambda_uri();  // abstraction binder of the built-in type system
bool is_reserved_uri(const Uri& uri);

// --- Free-variable wrappers -------------------------------------------------
// Objects are closed at the top level; an object with free variables is
// represented as Bind(Sym(free), ctx, body). These helpers treat an already
// closed object as having an empty context.
bool is_free_wrapper(const Object& object);
// Splits into (context, body); the body of a non-wrapper is the object itself.
std::pair<std::vector<BoundVar>, Object> split_free(const Object& object);
// Wraps body in a free-binder over ctx; merges with an existing wrapper on
// body (outer context first); returns body unchanged when the merged context
// is empty.
Object wrap_free(std::vector<BoundVar> ctx, const Object& body);

// --- Declarations -----------------------------------------------------------

struct Notation {
  enum class Fixity { Prefix, Infix, Mixfix };
  Fixity fixity = Fixity::Prefix;
  int precedence = 0;
  std::string symbol;          // display text, e.g. "+"
  std::string template_text;   // mixfix only: slots %1..%9, %% for a percent

  friend bool operator==(const Notation&, const Notation&) = default;
};

struct Constant {
  Uri uri;
  std::optional<Object> type;
  std::optional<Object> def;
};

struct Theory {
  Uri uri;
  std::vector<Uri> includes;
  std::vector<Constant> constants;
};

struct View {
  Uri uri;
  Uri domain;
  Uri codomain;
  std::vector<std::pair<Uri, Object>> assignments;
};

struct Style {
  Uri uri;
  std::vector<std::pair<Uri, Notation>> notations;

  const Notation* find_notation(const Uri& symbol) const;
};

class LibraryError : public std::runtime_error {
 public:
  explicit LibraryError(const std::string& message) : std::runtime_error(message) {}
};

// An immutable set of declarations indexed by URI. Build one with the free
// functions below (or from parts via Library::from_parts, which checks URI
// uniqueness across every declaration kind, constants included).
class Library {
 public:
  Library() = default;

  static Library from_parts(std::vector<Theory> theories, std::vector<View> views,
                            std::vector<Style> styles);

  const std::vector<Theory>& theories() const { return theories_; }
  const std::vector<View>& views() const { return views_; }
  const std::vector<Style>& styles() const { return styles_; }

  const Theory* find_theory(const Uri& uri) const;
  const View* find_view(const Uri& uri) const;
  const Style* find_style(const Uri& uri) const;
  const Constant* find_constant(const Uri& uri) const;
  // Theory whose constant list contains the given constant URI.
  const Theory* constant_owner(const Uri& uri) const;
  // True if the URI names any declaration in the library.
  bool declares(const Uri& uri) const;

  std::size_t declaration_count() const;

  // Include edges that point at theories absent from the library (kept as
  // facts; reported as warnings by loaders).
  std::vector<std::string> dangling_references() const;

 private:
  std::vector<Theory> theories_;
  std::vector<View> views_;
  std::vector<Style> styles_;
  std::map<std::string, std::size_t> theory_at_;
  std::map<std::string, std::size_t> view_at_;
  std::map<std::string, std::size_t> style_at_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> constant_at_;

  void index_declarations();
};

// --- JSON interchange ---------------------------------------------------------
// The on-disk format is a JSON document:
//   {"theories":[{"uri":…, "includes":[…], "constants":[{"uri":…, "type":TERM?,
//    "def":TERM?}]}], "views":[…], "styles":[…]}
// with TERM one of {"OMS":uri} | {"OMV":name} | {"OMA":[TERM,…]} |
// {"OMBIND":{"binder":TERM,"ctx":[{"name":…,"type":TERM?}],"body":TERM}} |
// {"OMLIT":{"kind":…,"value":…}}. See docs/library.schema.json.

Object object_from_json_text(const std::string& term_json);
std::string object_to_json_text(const Object& object);

// Parses a full library document. Structural JSON errors surface as
// ParseError; semantic problems (duplicate URIs, bad term shapes, reserved
// names) as LibraryError.
Library library_from_json_text(const std::string& document);
std::string library_to_json_text(const Library& library, int indent = -1);

// Reads one .json file, or every *.json file in a directory (sorted by name,
// merged). `warnings`, when given, collects dangling-include notes.
Library load_library(const std::string& path, std::vector<std::string>* warnings = nullptr);

// Fact-level union of several libraries; any URI declared twice is an error.
Library merge_libraries(const std::vector<Library>& libraries);

// FNV-1a over the canonical serialization; stable across runs and platforms.
std::uint64_t content_hash(const Library& library);

}  // namespace qmt::mmt
