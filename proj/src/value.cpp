#include "qmt/value.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace qmt {

struct Value::Node {
  Kind kind;
  std::string text;              // Uri, Xml
  std::optional<Object> object;  // Obj
  std::vector<Value> components; // Tuple
  ValueSet members;              // Set
  std::string key;
};

namespace {

void append_delimited(std::string& out, char tag, std::string_view payload) {
  out += tag;
  out += std::to_string(payload.size());
  out += ':';
  out += payload;
}

}  // namespace

Value Value::uri(std::string text) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Uri;
  node->text = std::move(text);
  append_delimited(node->key, 'u', node->text);
  return Value(std::move(node));
}

Value Value::object(Object obj) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Obj;
  append_delimited(node->key, 'o', alpha_key(obj));
  node->object = std::move(obj);
  return Value(std::move(node));
}

Value Value::xml(std::string element_text) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Xml;
  node->text = std::move(element_text);
  append_delimited(node->key, 'x', node->text);
  return Value(std::move(node));
}

Value Value::tuple(std::vector<Value> components) {
  std::vector<Value> flat;
  for (auto& c : components) {
    switch (c.kind()) {
      case Kind::Set:
        throw std::invalid_argument("tuple components must be element values");
      case Kind::Tuple:
        for (const auto& inner : c.components()) flat.push_back(inner);
        break;
      default:
        flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) {
    throw std::invalid_argument("tuple requires at least one component");
  }
  if (flat.size() == 1) return std::move(flat.front());
  auto node = std::make_shared<Node>();
  node->kind = Kind::Tuple;
  node->key = "t(";
  for (const auto& c : flat) node->key += c.key();
  node->key += ')';
  node->components = std::move(flat);
  return Value(std::move(node));
}

Value Value::set(ValueSet members) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Set;
  node->key = "s(";
  for (const auto& m : members) node->key += m.key();
  node->key += ')';
  node->members = std::move(members);
  return Value(std::move(node));
}

Value::Kind Value::kind() const { return node_->kind; }

const std::string& Value::uri_text() const {
  assert(node_->kind == Kind::Uri);
  return node_->text;
}

const Object& Value::obj() const {
  assert(node_->kind == Kind::Obj);
  return *node_->object;
}

const std::string& Value::xml_text() const {
  assert(node_->kind == Kind::Xml);
  return node_->text;
}

std::span<const Value> Value::components() const {
  assert(node_->kind == Kind::Tuple);
  return node_->components;
}

const ValueSet& Value::members() const {
  assert(node_->kind == Kind::Set);
  return node_->members;
}

const std::string& Value::key() const { return node_->key; }

void ValueSet::insert(Value value) {
  if (value.kind() == Value::Kind::Set) {
    throw std::invalid_argument("sets contain element values only");
  }
  auto it = std::lower_bound(
      items_.begin(), items_.end(), value.key(),
      [](const auto& item, const std::string& key) { return item.first < key; });
  if (it != items_.end() && it->first == value.key()) return;
  items_.insert(it, {value.key(), std::move(value)});
}

bool ValueSet::contains(const Value& value) const {
  auto it = std::lower_bound(
      items_.begin(), items_.end(), value.key(),
      [](const auto& item, const std::string& key) { return item.first < key; });
  return it != items_.end() && it->first == value.key();
}

bool ValueSet::operator==(const ValueSet& other) const {
  if (items_.size() != other.items_.size()) return false;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].first != other.items_[i].first) return false;
  }
  return true;
}

ValueSet set_union(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  out.items_.reserve(a.items_.size() + b.items_.size());
  std::size_t i = 0, j = 0;
  while (i < a.items_.size() && j < b.items_.size()) {
    if (a.items_[i].first < b.items_[j].first) {
      out.items_.push_back(a.items_[i++]);
    } else if (b.items_[j].first < a.items_[i].first) {
      out.items_.push_back(b.items_[j++]);
    } else {
      out.items_.push_back(a.items_[i]);
      ++i;
      ++j;
    }
  }
  while (i < a.items_.size()) out.items_.push_back(a.items_[i++]);
  while (j < b.items_.size()) out.items_.push_back(b.items_[j++]);
  return out;
}

ValueSet set_intersect(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  std::size_t i = 0, j = 0;
  while (i < a.items_.size() && j < b.items_.size()) {
    if (a.items_[i].first < b.items_[j].first) {
      ++i;
    } else if (b.items_[j].first < a.items_[i].first) {
      ++j;
    } else {
      out.items_.push_back(a.items_[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

ValueSet set_diff(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  std::size_t i = 0, j = 0;
  while (i < a.items_.size()) {
    while (j < b.items_.size() && b.items_[j].first < a.items_[i].first) ++j;
    if (j == b.items_.size() || b.items_[j].first != a.items_[i].first) {
      out.items_.push_back(a.items_[i]);
    }
    ++i;
  }
  return out;
}

std::string to_text(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::Uri:
      return "uri\"" + value.uri_text() + "\"";
    case Value::Kind::Obj:
      return "obj " + to_text(value.obj());
    case Value::Kind::Xml:
      return value.xml_text();
    case Value::Kind::Tuple: {
      std::string out = "(";
      bool first = true;
      for (const auto& c : value.components()) {
        if (!first) out += ", ";
        first = false;
        out += to_text(c);
      }
      out += ')';
      return out;
    }
    case Value::Kind::Set: {
      std::string out = "{";
      bool first = true;
      for (const auto& m : value.members()) {
        if (!first) out += ", ";
        first = false;
        out += to_text(m);
      }
      out += '}';
      return out;
    }
  }
  return {};
}

}  // namespace qmt
