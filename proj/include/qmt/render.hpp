#pragma once

#include <optional>

#include "qmt/library.hpp"
#include "qmt/object.hpp"
#include "qmt/xml.hpp"

namespace qmt::mmt {

// Presentation markup for an object under a style: notations drive the output
// (prefix symbol call, infix chaining, or mixfix template with %i argument
// slots), arguments are parenthesized when their notation's precedence is
// lower than the surrounding one, and symbols without a notation fall back to
// a generic prefix call of their name. Returns nullopt when the style is not
// declared.
std::optional<XmlNode> render_object(const Library& library, const Object& object,
                                     const Uri& style);

// Markup for a declaration: constants as "name : type = definiens" (parts
// present as declared), theories/views/styles as a headline of their kind and
// name. Returns nullopt when the style or the declaration does not exist.
std::optional<XmlNode> render_declaration(const Library& library, const Uri& declaration,
                                          const Uri& style);

}  // namespace qmt::mmt
