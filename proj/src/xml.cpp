#include "qmt/xml.hpp"

#include <algorithm>
#include <cctype>

#include "qmt/errors.hpp"

namespace qmt {

const std::string* XmlNode::find_attr(std::string_view key) const {
  for (const auto& [k, v] : attrs) {
    if (k == key) return &v;
  }
  return nullptr;
}

const XmlNode* XmlNode::find_child(std::string_view element_name) const {
  for (const auto& c : children) {
    if (c.name == element_name) return &c;
  }
  return nullptr;
}

namespace {

class XmlParser {
 public:
  explicit XmlParser(std::string_view input) : in_(input) {}

  XmlNode parse_document() {
    skip_misc();
    XmlNode root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after document element");
    return root;
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("xml: " + message, line_, col_);
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return eof() ? '\0' : in_[pos_]; }

  char advance() {
    if (eof()) fail("unexpected end of input");
    char c = in_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool consume(std::string_view token) {
    if (in_.substr(pos_).substr(0, token.size()) != token) return false;
    for (std::size_t i = 0; i < token.size(); ++i) advance();
    return true;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (consume("<?")) {
        while (!consume("?>")) advance();
      } else if (consume("<!--")) {
        while (!consume("-->")) advance();
      } else {
        return;
      }
    }
  }

  static bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
  }
  static bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::string out;
    out.push_back(advance());
    while (!eof() && is_name_char(peek())) out.push_back(advance());
    return out;
  }

  std::string parse_reference() {
    // Called after '&' has been consumed.
    std::string entity;
    while (!eof() && peek() != ';') entity.push_back(advance());
    if (eof()) fail("unterminated entity reference");
    advance();  // ';'
    if (entity == "lt") return "<";
    if (entity == "gt") return ">";
    if (entity == "amp") return "&";
    if (entity == "apos") return "'";
    if (entity == "quot") return "\"";
    if (!entity.empty() && entity[0] == '#') {
      int base = 10;
      std::size_t start = 1;
      if (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X')) {
        base = 16;
        start = 2;
      }
      if (start >= entity.size()) fail("empty character reference");
      unsigned long code = 0;
      for (std::size_t i = start; i < entity.size(); ++i) {
        char c = entity[i];
        int digit;
        if (c >= '0' && c <= '9') {
          digit = c - '0';
        } else if (base == 16 && c >= 'a' && c <= 'f') {
          digit = c - 'a' + 10;
        } else if (base == 16 && c >= 'A' && c <= 'F') {
          digit = c - 'A' + 10;
        } else {
          fail("bad digit in character reference");
        }
        code = code * static_cast<unsigned long>(base) + static_cast<unsigned long>(digit);
        if (code > 0x10FFFF) fail("character reference out of range");
      }
      return encode_utf8(static_cast<unsigned long>(code));
    }
    fail("unknown entity '&" + entity + ";'");
  }

  static std::string encode_utf8(unsigned long code) {
    std::string out;
    if (code < 0x80) {
      out.push_back(static_cast<char>(code));
    } else if (code < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (code >> 6)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else if (code < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (code >> 12)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (code >> 18)));
      out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    }
    return out;
  }

  std::string parse_attr_value() {
    char quote = advance();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated attribute value");
      char c = advance();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        out += parse_reference();
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  XmlNode parse_element() {
    if (!consume("<")) fail("expected '<'");
    XmlNode node;
    node.name = parse_name();
    for (;;) {
      skip_ws();
      if (consume("/>")) return node;
      if (consume(">")) break;
      std::string key = parse_name();
      for (const auto& [k, v] : node.attrs) {
        if (k == key) fail("duplicate attribute '" + key + "'");
      }
      skip_ws();
      if (!consume("=")) fail("expected '=' after attribute name");
      skip_ws();
      node.attrs.emplace_back(std::move(key), parse_attr_value());
    }
    parse_content(node);
    return node;
  }

  void parse_content(XmlNode& node) {
    std::string text;
    for (;;) {
      if (eof()) fail("unterminated element <" + node.name + ">");
      if (consume("<!--")) {
        while (!consume("-->")) advance();
        continue;
      }
      if (consume("</")) {
        std::string closing = parse_name();
        if (closing != node.name) {
          fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
        }
        skip_ws();
        if (!consume(">")) fail("expected '>' in close tag");
        break;
      }
      if (peek() == '<') {
        node.children.push_back(parse_element());
        continue;
      }
      char c = advance();
      if (c == '&') {
        text += parse_reference();
      } else {
        text.push_back(c);
      }
    }
    // Whitespace-only text between child elements is formatting, not data.
    bool only_space = std::all_of(text.begin(), text.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c));
    });
    if (!node.children.empty() && only_space) return;
    if (!only_space && !node.children.empty()) {
      fail("element <" + node.name + "> mixes text and child elements");
    }
    node.text = std::move(text);
  }
};

void serialize_rec(const XmlNode& node, std::string& out, int indent, int depth) {
  auto pad = [&](int d) {
    if (indent >= 0) out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  pad(depth);
  out += '<';
  out += node.name;
  auto sorted = node.attrs;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [k, v] : sorted) {
    out += ' ';
    out += k;
    out += "=\"";
    out += xml_escape(v);
    out += '"';
  }
  if (node.children.empty() && node.text.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  if (!node.children.empty()) {
    for (const auto& c : node.children) {
      if (indent >= 0) out += '\n';
      serialize_rec(c, out, indent, depth + 1);
    }
    if (indent >= 0) {
      out += '\n';
      pad(depth);
    }
  } else {
    out += xml_escape(node.text);
  }
  out += "</";
  out += node.name;
  out += '>';
}

}  // namespace

XmlNode xml_parse(std::string_view input) { return XmlParser(input).parse_document(); }

std::string xml_serialize(const XmlNode& node, int indent) {
  std::string out;
  serialize_rec(node, out, indent, 0);
  return out;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace qmt
