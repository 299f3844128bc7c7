#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "qmt/eval.hpp"
#include "qmt/query_xml.hpp"
#include "qmt/value.hpp"
#include "qmt/xml.hpp"

namespace qmt {

// Value <-> JSON codec, also used by the persistent index cache:
// {"uri": S} | {"obj": TERM} | {"xml": S} | {"tuple": [V...]} | {"set": [V...]}.
nlohmann::json value_to_json(const Value& value);
Value value_from_json(const nlohmann::json& encoded);

// Value as a result element: <uri value=.../>, <obj>TERM</obj>,
// <tuple>..</tuple>, <set>..</set> (members in canonical order), and <xml>
// with the markup inlined when it parses, else carried in a value attribute.
XmlNode value_to_xml(const Value& value);

// Outcome of running one query document. Exactly one of `value` (outcome ok)
// or `error_kind`/`error_message` (outcome error) is meaningful; `type_text`
// is filled whenever the query typechecked, including Undefined outcomes.
struct ResultDocument {
  bool ok = false;
  std::string type_text;
  std::optional<Value> value;
  std::string error_kind;
  std::string error_message;
};

ResultDocument ok_result(std::string type_text, Value value);
ResultDocument error_result(std::string kind, std::string message, std::string type_text = "");

// Typechecks (with the document's signature extensions applied on top of the
// model's signature) and evaluates. Undefined evaluations come back as
// outcome error with kind "undefined" and the trace in the message; type and
// extension-signature problems as kind "type-error".
ResultDocument run_query_document(const Model& model, const QueryDocument& doc);

// Renderings. The text form is line-oriented: "ok TYPE" followed by one
// canonical line per set element (or the single value), or "error KIND"
// followed by the message. XML and JSON mirror each other one-to-one.
std::string result_to_text(const ResultDocument& result);
std::string result_to_xml_text(const ResultDocument& result, int indent = 2);
std::string result_to_json_text(const ResultDocument& result, int indent = 2);

// Number of reported elements (set size, or 1), used for result-size caps.
std::size_t result_element_count(const ResultDocument& result);

}  // namespace qmt
