#pragma once

#include <string>
#include <vector>

#include "qmt/ast.hpp"
#include "qmt/object.hpp"
#include "qmt/signature.hpp"
#include "qmt/xml.hpp"

namespace qmt {

// A self-contained request: optional signature extensions (checked on top of
// the host signature), one query expression, and evaluation flags.
struct QueryDocument {
  std::vector<SignatureDecl> declarations;
  QueryExpr query;
  bool lenient_filter = false;
};

// Structured XML vocabulary for expressions; element names and attributes are
// the wire format:
//   <concept name=.../>  <var name=.../>  <apply fun=...>ARGS</apply>
//   <tuple>ITEMS</tuple>  <proj i=N>Q</proj>  <image>REL Q</image>
//   <bigunion var=x>DOMAIN BODY</bigunion>
//   <comprehension var=x>DOMAIN FILTER</comprehension>
//   <literal type="uri" value=.../>  <literal type="xml" value=.../>
//   <literal type="obj">TERM</literal>
//   <rel name=.../>  <rel op="inverse|closure">SUB</rel>
//   <rel op="compose|union|intersect|diff">LEFT RIGHT</rel>
//   <prop op="pred" name=...>ARGS</prop>  <prop op="not">SUB</prop>
//   <prop op="and">LEFT RIGHT</prop>  <prop op="forall" var=x>DOMAIN BODY</prop>
// and terms:
//   <OMS uri=.../>  <OMV name=.../>  <OMA>HEAD ARGS</OMA>
//   <OMBIND><binder>T</binder><ctx><v name=x>TYPE?</v>...</ctx><body>T</body></OMBIND>
//   <OMLIT kind="integer|string" value=.../>
XmlNode query_to_xml(const QueryExpr& query);
XmlNode rel_to_xml(const RelExpr& rel);
XmlNode prop_to_xml(const PropExpr& prop);
XmlNode object_to_xml(const Object& object);

QueryExpr query_from_xml(const XmlNode& element);
RelExpr rel_from_xml(const XmlNode& element);
PropExpr prop_from_xml(const XmlNode& element);
Object object_from_xml(const XmlNode& element);

// General types as text: "uri", "(uri, obj)", "{uri}", "{(uri, uri)}".
// The inverse of to_text(GeneralType); throws ParseError on malformed input.
GeneralType general_type_from_text(const std::string& text);

// Signature declarations as XML, used both for the <declare> section of a
// query document and for serving the installed signature:
//   <base name=.../>  <concept name=... type=BASE/>
//   <relation name=... source=BASE target=BASE/>
//   <function name=... result=TYPE><param type=TYPE/>...</function>
//   <predicate name=...><param type=TYPE/>...</predicate>
XmlNode signature_to_xml(const Signature& sig);
std::vector<SignatureDecl> declarations_from_xml(const XmlNode& parent);

// Whole documents. The XML root is either <query> (attribute lenient-filter,
// optional <declare> child, one expression child) or a bare expression
// element. The JSON form is {"query": TEXT, "lenient-filter": BOOL?,
// "declare": {"base-types": [...], "concepts": [{"name","type"}],
// "relations": [{"name","source","target"}],
// "functions": [{"name","params":[TYPE...],"result":TYPE}],
// "predicates": [{"name","params":[TYPE...]}]}} or a bare JSON string; the
// textual query is parsed against `base` extended with the declarations.
QueryDocument query_document_from_xml_text(const std::string& text);
QueryDocument query_document_from_json_text(const std::string& text, const Signature& base);
QueryDocument query_document_from_query_text(const std::string& text, const Signature& base);

std::string query_document_to_xml_text(const QueryDocument& doc, int indent = -1);

}  // namespace qmt
