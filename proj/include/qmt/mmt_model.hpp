#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "qmt/eval.hpp"
#include "qmt/index.hpp"
#include "qmt/library.hpp"
#include "qmt/signature.hpp"
#include "qmt/typeinfer.hpp"

namespace qmt::mmt {

inline constexpr const char* kUriType = "uri";
inline constexpr const char* kObjType = "obj";
inline constexpr const char* kXmlType = "xml";

// The library signature: base types uri, obj, xml; concepts theory, view,
// constant, style over uri; relations includes, declares, domain, codomain
// over uri pairs; functions typeOF, defOF, typeof, subobjat_<p> (a name
// family over the position), subobjhead, unify, and render (overloaded for
// declarations and objects); predicate occurs. The polymorphic built-ins
// (singleton, union, ==, in) are enabled.
Signature mmt_signature();

// Name scheme of the position-indexed subobject accessors: subobjat_0,
// subobjat_1, ... (no leading zeros).
bool parse_subobjat_name(const std::string& name, std::size_t* position_out = nullptr);
std::string subobjat_name(std::size_t position);

// Concept and relation facts of a library: membership facts per declaration
// kind; one reflexive includes edge per theory plus the direct include edges
// (dangling targets included); declares edges from each theory to every
// constant of the theory itself or of a theory transitively included into
// it; domain and codomain edges per view.
FactSet extract_facts(const Library& library);

// Base type membership used by literals: a uri value must name a library
// declaration; an obj value may mention declared identifiers and the
// reserved meta identifiers; xml values are opaque.
BaseTypeTests mmt_membership(std::shared_ptr<const Library> library);

// Executable model over a library: the extracted facts become the index, and
// the signature's functions and predicates get host implementations backed
// by the library, its subterm index, and the plugin registry.
Model make_model(std::shared_ptr<const Library> library,
                 PluginRegistry plugins = PluginRegistry::with_builtins());

}  // namespace qmt::mmt
