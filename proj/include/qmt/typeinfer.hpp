#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "qmt/library.hpp"
#include "qmt/object.hpp"

namespace qmt::mmt {

// Resolves a constant URI to its declared type, if any; supplied by the
// model so plugins stay independent of the library representation.
using ConstantTypeLookup = std::function<std::optional<Object>(const Uri&)>;

// One type system. `infer` returns the type of an object, or nullopt when the
// object is ill-typed for this system. An outer free-binder wrapper supplies
// the typing context for the wrapped body.
class TypeInferencePlugin {
 public:
  virtual ~TypeInferencePlugin() = default;
  virtual std::optional<Object> infer(const Object& object,
                                      const ConstantTypeLookup& constant_type) const = 0;
};

// Type systems are registered under the URI of the theory that defines them;
// the two-argument typing function selects a plugin by that URI.
class PluginRegistry {
 public:
  void add(const Uri& theory, std::shared_ptr<const TypeInferencePlugin> plugin);
  const TypeInferencePlugin* find(const Uri& theory) const;

  // Registry with the built-in simply typed plugin installed.
  static PluginRegistry with_builtins();

 private:
  std::map<std::string, std::shared_ptr<const TypeInferencePlugin>> plugins_;
};

// Theory URI of the built-in simply typed lambda calculus. A library makes
// the system addressable in queries by declaring a theory with this URI
// (URI literals only denote declared identifiers).
const Uri& simply_typed_theory();

// Simply typed lambda calculus over the library's constants: base types are
// symbols, function types are arrow applications (n-ary, right associated),
// variables take their types from binder annotations, lambda abstraction
// uses the reserved lambda binder, application peels arrows, and literals
// have the reserved integer/string types. Domain checks are up to
// alpha-equality.
std::shared_ptr<const TypeInferencePlugin> simply_typed_plugin();

// Reserved types the built-in plugin assigns to literals.
const Uri& integer_type_uri();
const Uri& string_type_uri();

}  // namespace qmt::mmt
