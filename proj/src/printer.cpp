#include "qmt/printer.hpp"

#include <sstream>
#include <stdexcept>
#include <variant>

#include "qmt/library.hpp"
#include "qmt/sugar.hpp"

namespace qmt {

namespace {

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Relation operators from loosest to tightest binding; parenthesized
// subexpressions count as atoms.
enum RelLevel {
  kRelDiff = 1,
  kRelIntersect = 2,
  kRelUnion = 3,
  kRelCompose = 4,
  kRelInverse = 5,
  kRelClosure = 6,
  kRelAtom = 7,
};

int rel_level(const RelExpr& rel) {
  return std::visit(
      [](const auto& node) -> int {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RelAtom>) return kRelAtom;
        if constexpr (std::is_same_v<T, RelInverse>) return kRelInverse;
        if constexpr (std::is_same_v<T, RelClosure>) return kRelClosure;
        if constexpr (std::is_same_v<T, RelCompose>) return kRelCompose;
        if constexpr (std::is_same_v<T, RelUnion>) return kRelUnion;
        if constexpr (std::is_same_v<T, RelIntersect>) return kRelIntersect;
        return kRelDiff;
      },
      rel.node());
}

void rel_to(std::ostream& out, const RelExpr& rel, int required);

void rel_binary(std::ostream& out, const RelExpr& left, const char* op,
                const RelExpr& right, int level) {
  rel_to(out, left, level);
  out << ' ' << op << ' ';
  rel_to(out, right, level + 1);
}

void rel_to(std::ostream& out, const RelExpr& rel, int required) {
  int level = rel_level(rel);
  bool parens = level < required;
  if (parens) out << '(';
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RelAtom>) {
          out << node.name;
        } else if constexpr (std::is_same_v<T, RelInverse>) {
          out << "inv ";
          rel_to(out, node.sub, kRelInverse);
        } else if constexpr (std::is_same_v<T, RelClosure>) {
          rel_to(out, node.sub, kRelClosure);
          out << '+';
        } else if constexpr (std::is_same_v<T, RelCompose>) {
          rel_binary(out, node.left, ";", node.right, kRelCompose);
        } else if constexpr (std::is_same_v<T, RelUnion>) {
          rel_binary(out, node.left, "|", node.right, kRelUnion);
        } else if constexpr (std::is_same_v<T, RelIntersect>) {
          rel_binary(out, node.left, "&", node.right, kRelIntersect);
        } else {
          rel_binary(out, node.left, "\\", node.right, kRelDiff);
        }
      },
      rel.node());
  if (parens) out << ')';
}

void query_to(std::ostream& out, const QueryExpr& query);
void prop_to(std::ostream& out, const PropExpr& prop, bool parenthesize_and);

// Queries that a trailing `.N` projection or a leading relation probe cannot
// swallow part of; everything else gets wrapped before postfix/infix use.
bool postfix_safe(const QueryExpr& query) {
  return std::visit(
      [](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        return std::is_same_v<T, ConceptRef> || std::is_same_v<T, VarRef> ||
               std::is_same_v<T, FunApp> || std::is_same_v<T, TupleExpr> ||
               std::is_same_v<T, Projection> || std::is_same_v<T, LiteralExpr> ||
               std::is_same_v<T, Comprehension>;
      },
      query.node());
}

void query_grouped(std::ostream& out, const QueryExpr& query, bool group) {
  if (group) out << '(';
  query_to(out, query);
  if (group) out << ')';
}

// Binder domains are grouped when they themselves end in a greedy body, so
// the binder's own '.' stays visually (and unambiguously) attached.
bool domain_needs_group(const QueryExpr& domain) {
  return std::holds_alternative<BigUnion>(domain.node());
}

void literal_to(std::ostream& out, const LiteralExpr& node) {
  if (node.base_type == "uri" && node.value.kind() == Value::Kind::Uri) {
    out << "uri " << quoted(node.value.uri_text());
    return;
  }
  if (node.base_type == "xml" && node.value.kind() == Value::Kind::Xml) {
    out << "xml " << quoted(node.value.xml_text());
    return;
  }
  if (node.base_type == "obj" && node.value.kind() == Value::Kind::Obj) {
    out << "obj " << mmt::object_to_json_text(node.value.obj());
    return;
  }
  throw std::invalid_argument("literal of base type '" + node.base_type +
                              "' has no textual form");
}

void query_to(std::ostream& out, const QueryExpr& query) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ConceptRef>) {
          out << node.name;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          out << node.name;
        } else if constexpr (std::is_same_v<T, FunApp>) {
          out << node.fun << '(';
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i) out << ", ";
            query_to(out, node.args[i]);
          }
          out << ')';
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          out << '(';
          for (std::size_t i = 0; i < node.items.size(); ++i) {
            if (i) out << ", ";
            query_to(out, node.items[i]);
          }
          out << ')';
        } else if constexpr (std::is_same_v<T, Projection>) {
          query_grouped(out, node.tuple, !postfix_safe(node.tuple));
          out << '.' << node.index;
        } else if constexpr (std::is_same_v<T, RelImage>) {
          rel_to(out, node.rel, kRelDiff);
          out << " of ";
          query_to(out, node.arg);
        } else if constexpr (std::is_same_v<T, BigUnion>) {
          out << "union " << node.var << " in ";
          query_grouped(out, node.domain, domain_needs_group(node.domain));
          out << " . ";
          query_to(out, node.body);
        } else if constexpr (std::is_same_v<T, Comprehension>) {
          out << '{' << node.var << " in ";
          query_grouped(out, node.domain, domain_needs_group(node.domain));
          out << " | ";
          prop_to(out, node.filter, false);
          out << '}';
        } else {
          literal_to(out, node);
        }
      },
      query.node());
}

// A quantifier body extends as far right as possible, so a conjunct whose
// printed form ends in a bare quantifier body would swallow whatever follows.
// The right operand of a conjunction is the only position printed without its
// own grouping (nested conjunctions there get parentheses already).
bool ends_with_open_forall(const PropExpr& prop) {
  if (std::holds_alternative<ForallIn>(prop.node())) return true;
  if (const auto* conj = std::get_if<PropAnd>(&prop.node())) {
    if (std::holds_alternative<PropAnd>(conj->right.node())) return false;
    return ends_with_open_forall(conj->right);
  }
  return false;
}

void prop_to(std::ostream& out, const PropExpr& prop, bool parenthesize_and) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PredApp>) {
          if (node.pred == kEqualPred && node.args.size() == 2) {
            query_to(out, node.args[0]);
            out << " == ";
            query_to(out, node.args[1]);
          } else if (node.pred == kMemberPred && node.args.size() == 2) {
            query_to(out, node.args[0]);
            out << " in ";
            query_to(out, node.args[1]);
          } else {
            out << node.pred << '(';
            for (std::size_t i = 0; i < node.args.size(); ++i) {
              if (i) out << ", ";
              query_to(out, node.args[i]);
            }
            out << ')';
          }
        } else if constexpr (std::is_same_v<T, PropNot>) {
          out << "!(";
          prop_to(out, node.sub, false);
          out << ')';
        } else if constexpr (std::is_same_v<T, PropAnd>) {
          bool parens = parenthesize_and;
          if (parens) out << '(';
          bool left_group = ends_with_open_forall(node.left);
          if (left_group) out << '(';
          prop_to(out, node.left, false);
          if (left_group) out << ')';
          out << " && ";
          prop_to(out, node.right, true);
          if (parens) out << ')';
        } else {
          out << "forall " << node.var << " in ";
          query_grouped(out, node.domain, domain_needs_group(node.domain));
          out << " . ";
          prop_to(out, node.body, false);
        }
      },
      prop.node());
}

}  // namespace

std::string print_query(const QueryExpr& query) {
  std::ostringstream out;
  query_to(out, query);
  return out.str();
}

std::string print_rel(const RelExpr& rel) {
  std::ostringstream out;
  rel_to(out, rel, kRelDiff);
  return out.str();
}

std::string print_prop(const PropExpr& prop) {
  std::ostringstream out;
  prop_to(out, prop, false);
  return out.str();
}

}  // namespace qmt
