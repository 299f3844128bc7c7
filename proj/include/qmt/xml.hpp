#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmt {

// Minimal XML element tree for the query, result, and rendering vocabularies
// defined by this project. Attributes keep insertion order but serialize
// sorted by name; text and child elements do not interleave (text-only or
// children-only elements cover every format we emit or accept).
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;
  std::string text;

  XmlNode() = default;
  explicit XmlNode(std::string element_name) : name(std::move(element_name)) {}

  XmlNode& attr(std::string key, std::string value) {
    attrs.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  XmlNode& child(XmlNode node) {
    children.push_back(std::move(node));
    return *this;
  }

  const std::string* find_attr(std::string_view key) const;
  const XmlNode* find_child(std::string_view element_name) const;
};

// Parses one element (an optional XML declaration and comments are skipped).
// Supports the five predefined entities and decimal/hex character references.
// Throws ParseError with a 1-based position.
XmlNode xml_parse(std::string_view input);

// Canonical single-line serialization: attributes sorted by name, minimal
// escaping. With indent >= 0, children are placed on indented lines.
std::string xml_serialize(const XmlNode& node, int indent = -1);

std::string xml_escape(std::string_view text);

}  // namespace qmt
