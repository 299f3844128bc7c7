#include "qmt/render.hpp"

#include <limits>
#include <string>
#include <vector>

namespace qmt::mmt {

namespace {

constexpr int kAtomPrec = std::numeric_limits<int>::max();
constexpr int kBinderPrec = std::numeric_limits<int>::min();

struct Rendered {
  XmlNode node;
  int precedence = kAtomPrec;  // how tightly the markup binds
};

XmlNode leaf(const char* tag, std::string text) {
  XmlNode n(tag);
  n.text = std::move(text);
  return n;
}

XmlNode parenthesized(XmlNode inner) {
  XmlNode row("mrow");
  row.child(leaf("mo", "("));
  row.child(std::move(inner));
  row.child(leaf("mo", ")"));
  return row;
}

std::string display_name(const Uri& uri) {
  auto name = uri.name_part();
  return name.empty() ? uri.str() : std::string(name);
}

class Renderer {
 public:
  Renderer(const Library& library, const Style& style) : library_(library), style_(style) {}

  Rendered object(const Object& o) {
    switch (o.kind()) {
      case Object::Kind::Sym: {
        if (const Notation* n = style_.find_notation(o.sym_uri())) {
          return {leaf("mo", n->symbol), kAtomPrec};
        }
        return {leaf("mi", display_name(o.sym_uri())), kAtomPrec};
      }
      case Object::Kind::Var:
        return {leaf("mi", o.var_name()), kAtomPrec};
      case Object::Kind::Lit:
        return {leaf(o.lit_kind() == "integer" ? "mn" : "ms", o.lit_value()), kAtomPrec};
      case Object::Kind::App:
        return application(o);
      case Object::Kind::Bind:
        return binding(o);
    }
    return {leaf("mi", "?"), kAtomPrec};
  }

 private:
  const Library& library_;
  const Style& style_;

  // Child markup, parenthesized when it binds more loosely than the context.
  XmlNode argument(const Object& o, int context_prec) {
    Rendered r = object(o);
    if (r.precedence < context_prec) return parenthesized(std::move(r.node));
    return std::move(r.node);
  }

  Rendered generic_application(const Object& head, std::span<const Object> args) {
    XmlNode row("mrow");
    row.child(argument(head, kAtomPrec));
    row.child(leaf("mo", "("));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i > 0) row.child(leaf("mo", ","));
      row.child(object(args[i]).node);
    }
    row.child(leaf("mo", ")"));
    return {std::move(row), kAtomPrec};  // self-delimiting
  }

  Rendered application(const Object& o) {
    const Object& head = o.head();
    auto args = o.args();
    const Notation* n = head.kind() == Object::Kind::Sym
                            ? style_.find_notation(head.sym_uri())
                            : nullptr;
    if (!n) return generic_application(head, args);
    switch (n->fixity) {
      case Notation::Fixity::Infix: {
        if (args.size() < 2) return generic_application(head, args);
        XmlNode row("mrow");
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (i > 0) row.child(leaf("mo", n->symbol));
          row.child(argument(args[i], n->precedence));
        }
        return {std::move(row), n->precedence};
      }
      case Notation::Fixity::Mixfix: {
        auto rendered = instantiate_template(*n, args);
        if (rendered) return {std::move(*rendered), n->precedence};
        return generic_application(head, args);  // slot/arity mismatch
      }
      case Notation::Fixity::Prefix: {
        XmlNode row("mrow");
        row.child(leaf("mo", n->symbol));
        row.child(leaf("mo", "("));
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (i > 0) row.child(leaf("mo", ","));
          row.child(object(args[i]).node);
        }
        row.child(leaf("mo", ")"));
        return {std::move(row), kAtomPrec};
      }
    }
    return generic_application(head, args);
  }

  // Fills %1..%9 with rendered arguments; %% is a literal percent. Returns
  // nullopt when the slots do not cover the argument list exactly.
  std::optional<XmlNode> instantiate_template(const Notation& n, std::span<const Object> args) {
    XmlNode row("mrow");
    std::string pending;
    std::vector<bool> used(args.size(), false);
    auto flush = [&row, &pending]() {
      if (pending.empty()) return;
      std::string trimmed;
      std::size_t a = pending.find_first_not_of(' ');
      std::size_t b = pending.find_last_not_of(' ');
      if (a != std::string::npos) trimmed = pending.substr(a, b - a + 1);
      if (!trimmed.empty()) row.child(leaf("mo", trimmed));
      pending.clear();
    };
    const std::string& t = n.template_text;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] != '%') {
        pending.push_back(t[i]);
        continue;
      }
      if (i + 1 >= t.size()) return std::nullopt;
      char c = t[++i];
      if (c == '%') {
        pending.push_back('%');
        continue;
      }
      if (c < '1' || c > '9') return std::nullopt;
      std::size_t slot = static_cast<std::size_t>(c - '1');
      if (slot >= args.size()) return std::nullopt;
      flush();
      used[slot] = true;
      row.child(argument(args[slot], n.precedence));
    }
    flush();
    for (bool u : used) {
      if (!u) return std::nullopt;
    }
    return row;
  }

  Rendered binding(const Object& o) {
    XmlNode row("mrow");
    const Object& binder = o.binder();
    if (binder.kind() == Object::Kind::Sym) {
      if (const Notation* n = style_.find_notation(binder.sym_uri())) {
        row.child(leaf("mo", n->symbol));
      } else {
        row.child(leaf("mo", display_name(binder.sym_uri())));
      }
    } else {
      row.child(object(binder).node);
    }
    bool first = true;
    for (const auto& bv : o.bound_context()) {
      if (!first) row.child(leaf("mo", ","));
      first = false;
      row.child(leaf("mi", bv.name));
      if (bv.type) {
        row.child(leaf("mo", ":"));
        row.child(argument(*bv.type, kBinderPrec + 1));
      }
    }
    row.child(leaf("mo", "."));
    row.child(argument(o.body(), kBinderPrec + 1));
    return {std::move(row), kBinderPrec};
  }
};

XmlNode math_root(XmlNode content) {
  XmlNode root("math");
  root.child(std::move(content));
  return root;
}

}  // namespace

std::optional<XmlNode> render_object(const Library& library, const Object& object,
                                     const Uri& style) {
  const Style* s = library.find_style(style);
  if (!s) return std::nullopt;
  Renderer renderer(library, *s);
  return math_root(renderer.object(object).node);
}

std::optional<XmlNode> render_declaration(const Library& library, const Uri& declaration,
                                          const Uri& style) {
  const Style* s = library.find_style(style);
  if (!s) return std::nullopt;
  Renderer renderer(library, *s);

  if (const Constant* c = library.find_constant(declaration)) {
    XmlNode row("mrow");
    row.child(leaf("mi", display_name(c->uri)));
    if (c->type) {
      row.child(leaf("mo", ":"));
      row.child(renderer.object(*c->type).node);
    }
    if (c->def) {
      row.child(leaf("mo", "="));
      row.child(renderer.object(*c->def).node);
    }
    return math_root(std::move(row));
  }
  auto headline = [&](const char* kind, const Uri& uri) {
    XmlNode row("mrow");
    row.child(leaf("mo", kind));
    row.child(leaf("mi", display_name(uri)));
    return math_root(std::move(row));
  };
  if (library.find_theory(declaration)) return headline("theory", declaration);
  if (const View* v = library.find_view(declaration)) {
    XmlNode row("mrow");
    row.child(leaf("mo", "view"));
    row.child(leaf("mi", display_name(v->uri)));
    row.child(leaf("mo", ":"));
    row.child(leaf("mi", display_name(v->domain)));
    row.child(leaf("mo", "→"));
    row.child(leaf("mi", display_name(v->codomain)));
    return math_root(std::move(row));
  }
  if (library.find_style(declaration)) return headline("style", declaration);
  return std::nullopt;
}

}  // namespace qmt::mmt
