#include "qmt/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <vector>

#include "qmt/errors.hpp"
#include "qmt/library.hpp"
#include "qmt/sugar.hpp"

namespace qmt {

namespace {

struct Token {
  enum class Kind { Ident, Int, Str, ObjJson, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

const char* const kKeywords[] = {"union", "select", "from", "where", "for",
                                 "let",   "return", "box",  "inv",  "of",
                                 "forall", "in",    "uri",  "obj",  "xml"};

bool is_keyword(const std::string& word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : in_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      bool end = t.kind == Token::Kind::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, col_);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = in_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '#') {  // line comment
        while (pos_ < in_.size() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  Token token(Token::Kind kind, std::string text, int line, int col) const {
    return Token{kind, std::move(text), line, col};
  }

  Token next() {
    int line = line_, col = col_;
    if (pos_ >= in_.size()) return token(Token::Kind::End, "", line, col);
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        word.push_back(advance());
      }
      if (word == "obj") {
        std::size_t save_pos = pos_;
        int save_line = line_, save_col = col_;
        skip_space();
        if (peek() == '{') {
          return token(Token::Kind::ObjJson, scan_json(), line, col);
        }
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
      }
      return token(Token::Kind::Ident, std::move(word), line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
      return token(Token::Kind::Int, std::move(digits), line, col);
    }
    if (c == '"') return token(Token::Kind::Str, scan_string(), line, col);
    // Multi-character operators first.
    if (c == '=' && peek(1) == '=') {
      advance();
      advance();
      return token(Token::Kind::Punct, "==", line, col);
    }
    if (c == '&' && peek(1) == '&') {
      advance();
      advance();
      return token(Token::Kind::Punct, "&&", line, col);
    }
    static const std::string singles = "(){},.:;|&\\+^!=";
    if (singles.find(c) != std::string::npos) {
      advance();
      return token(Token::Kind::Punct, std::string(1, c), line, col);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string scan_string() {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated string");
      char c = advance();
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= in_.size()) fail("unterminated escape");
        char e = advance();
        if (e == '"' || e == '\\') {
          out.push_back(e);
        } else {
          fail("unknown escape in string");
        }
        continue;
      }
      out.push_back(c);
    }
  }

  // Raw balanced-brace scan of the JSON term following the obj keyword.
  std::string scan_json() {
    std::string out;
    int depth = 0;
    bool in_string = false;
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated obj literal");
      char c = advance();
      out.push_back(c);
      if (in_string) {
        if (c == '\\') {
          if (pos_ >= in_.size()) fail("unterminated obj literal");
          out.push_back(advance());
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) return out;
      }
    }
  }
};

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig)
      : sig_(sig), toks_(Lexer(text).run()) {}

  QueryExpr query_document() {
    QueryExpr q = query();
    expect_end();
    return q;
  }
  RelExpr rel_document() {
    RelExpr r = rel();
    expect_end();
    return r;
  }
  PropExpr prop_document() {
    PropExpr p = prop();
    expect_end();
    return p;
  }

 private:
  const Signature& sig_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<VarName> scope_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", got " + got, t.line, t.col);
  }

  bool at_punct(const char* text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == text;
  }
  bool at_word(const char* word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == word;
  }
  void eat_punct(const char* text) {
    if (!at_punct(text)) fail(std::string("expected '") + text + "'");
    ++pos_;
  }
  void eat_word(const char* word) {
    if (!at_word(word)) fail(std::string("expected '") + word + "'");
    ++pos_;
  }

  std::string ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected an identifier");
    if (is_keyword(peek().text)) fail("keyword '" + peek().text + "' cannot be a name here");
    return advance().text;
  }

  void expect_end() {
    if (peek().kind != Token::Kind::End) fail("expected end of input");
  }

  struct ScopeGuard {
    Parser& p;
    std::size_t mark;
    explicit ScopeGuard(Parser& parser) : p(parser), mark(parser.scope_.size()) {}
    ~ScopeGuard() { p.scope_.resize(mark); }
  };

  bool in_scope(const std::string& name) const {
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
  }

  // ---- relation expressions ---------------------------------------------

  RelExpr rel() { return rel_diff(); }

  RelExpr rel_diff() {
    RelExpr left = rel_intersect();
    while (at_punct("\\")) {
      ++pos_;
      left = RelExpr::diff(left, rel_intersect());
    }
    return left;
  }
  RelExpr rel_intersect() {
    RelExpr left = rel_union();
    while (at_punct("&")) {
      ++pos_;
      left = RelExpr::intersect(left, rel_union());
    }
    return left;
  }
  RelExpr rel_union() {
    RelExpr left = rel_compose();
    while (at_punct("|")) {
      ++pos_;
      left = RelExpr::set_union(left, rel_compose());
    }
    return left;
  }
  RelExpr rel_compose() {
    RelExpr left = rel_unary();
    while (at_punct(";")) {
      ++pos_;
      left = RelExpr::compose(left, rel_unary());
    }
    return left;
  }
  RelExpr rel_unary() {
    if (at_word("inv")) {
      ++pos_;
      return RelExpr::inverse(rel_unary());
    }
    RelExpr r = rel_primary();
    while (at_punct("+")) {
      ++pos_;
      r = RelExpr::closure(r);
    }
    return r;
  }
  RelExpr rel_primary() {
    if (at_punct("(")) {
      ++pos_;
      RelExpr r = rel();
      eat_punct(")");
      while (at_punct("+")) {
        ++pos_;
        r = RelExpr::closure(r);
      }
      return r;
    }
    return RelExpr::atom(ident());
  }

  // ---- query expressions --------------------------------------------------

  QueryExpr query() {
    // A relation expression followed by `of` is an image; everything that
    // can start a relation can also start a query, so probe and backtrack.
    std::size_t save = pos_;
    if (peek().kind == Token::Kind::Ident || at_punct("(")) {
      try {
        RelExpr r = rel();
        if (at_word("of")) {
          ++pos_;
          return with_postfix(QueryExpr::rel_image(r, query()));
        }
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return with_postfix(primary());
  }

  QueryExpr with_postfix(QueryExpr q) {
    while (at_punct(".") && peek(1).kind == Token::Kind::Int) {
      ++pos_;
      std::size_t index = std::stoull(advance().text);
      if (index == 0) fail("projections are 1-based");
      q = QueryExpr::proj(q, index);
    }
    return q;
  }

  QueryExpr primary() {
    if (at_word("union")) return union_form();
    if (at_word("select")) return select_form();
    if (at_word("for")) return for_form();
    if (at_word("box")) return box_form();
    if (at_word("uri")) {
      ++pos_;
      if (peek().kind != Token::Kind::Str) fail("expected a string after uri");
      return QueryExpr::literal(Value::uri(advance().text), "uri");
    }
    if (at_word("xml")) {
      ++pos_;
      if (peek().kind != Token::Kind::Str) fail("expected a string after xml");
      return QueryExpr::literal(Value::xml(advance().text), "xml");
    }
    if (peek().kind == Token::Kind::ObjJson) {
      const Token& t = advance();
      try {
        return QueryExpr::literal(Value::object(mmt::object_from_json_text(t.text)), "obj");
      } catch (const mmt::LibraryError& e) {
        throw ParseError(std::string("bad obj literal: ") + e.what(), t.line, t.col);
      }
    }
    if (at_punct("(")) {
      ++pos_;
      std::vector<QueryExpr> items;
      items.push_back(query());
      while (at_punct(",")) {
        ++pos_;
        items.push_back(query());
      }
      eat_punct(")");
      if (items.size() == 1) return items[0];
      return QueryExpr::tuple(std::move(items));
    }
    if (at_punct("{")) return brace_form();
    if (peek().kind == Token::Kind::Ident) {
      if (is_keyword(peek().text)) fail("unexpected keyword '" + peek().text + "'");
      std::string name = advance().text;
      if (at_punct("(")) {
        ++pos_;
        std::vector<QueryExpr> args;
        if (!at_punct(")")) {
          args.push_back(query());
          while (at_punct(",")) {
            ++pos_;
            args.push_back(query());
          }
        }
        eat_punct(")");
        return QueryExpr::apply(std::move(name), std::move(args));
      }
      if (in_scope(name)) return QueryExpr::var(std::move(name));
      if (sig_.find_concept(name)) return QueryExpr::concept_ref(std::move(name));
      return QueryExpr::var(std::move(name));
    }
    fail("expected a query");
  }

  QueryExpr union_form() {
    eat_word("union");
    if (at_punct("(")) {  // the built-in binary set union
      ++pos_;
      QueryExpr a = query();
      eat_punct(",");
      QueryExpr b = query();
      eat_punct(")");
      return QueryExpr::apply(kUnionFun, {std::move(a), std::move(b)});
    }
    std::string var = ident();
    eat_word("in");
    QueryExpr domain = query();
    eat_punct(".");
    ScopeGuard guard(*this);
    scope_.push_back(var);
    QueryExpr body = query();
    return QueryExpr::big_union(var, domain, body);
  }

  QueryExpr select_form() {
    eat_word("select");
    std::vector<std::size_t> indices;
    for (;;) {
      if (peek().kind != Token::Kind::Int) fail("expected a 1-based component number");
      std::size_t i = std::stoull(advance().text);
      if (i == 0) fail("components are numbered from 1");
      indices.push_back(i);
      if (!at_punct(",")) break;
      ++pos_;
    }
    eat_word("from");
    QueryExpr from = query();
    if (at_word("where")) {
      ++pos_;
      PropExpr where = prop();
      return desugar(SelectForm{std::move(indices), std::move(from), std::move(where)});
    }
    // Without a filter this is a plain replacement by projections.
    VarName row = "_row";
    std::vector<QueryExpr> picks;
    picks.reserve(indices.size());
    for (std::size_t i : indices) picks.push_back(QueryExpr::proj(QueryExpr::var(row), i));
    QueryExpr body = picks.size() == 1 ? picks[0] : QueryExpr::tuple(std::move(picks));
    return desugar(ReplacementForm{{Generator{row, std::move(from)}}, std::move(body)});
  }

  QueryExpr for_form() {
    eat_word("for");
    std::string var = ident();
    eat_word("in");
    QueryExpr source = query();
    eat_word("let");
    ScopeGuard guard(*this);
    scope_.push_back(var);
    std::string let_var = ident();
    eat_punct("=");
    QueryExpr bound = query();
    scope_.push_back(let_var);
    eat_word("where");
    PropExpr where = prop();
    eat_word("return");
    QueryExpr body = query();
    return desugar(ForLetForm{std::move(var), std::move(source), std::move(let_var),
                              std::move(bound), std::move(where), std::move(body)});
  }

  QueryExpr box_form() {
    eat_word("box");
    eat_punct("^");
    std::string concept_name = ident();
    RelExpr r = rel();
    eat_punct(".");
    QueryExpr filler = query();
    return desugar(DlBoxForm{std::move(concept_name), std::move(r), std::move(filler)});
  }

  // '{' x 'in' Q '|' F '}'  or  '{' body ':' x 'in' Q {',' y 'in' Q} '}'
  QueryExpr brace_form() {
    eat_punct("{");
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().text) && at_word("in", 1)) {
      std::string var = ident();
      eat_word("in");
      QueryExpr domain = query();
      eat_punct("|");
      ScopeGuard guard(*this);
      scope_.push_back(var);
      PropExpr filter = prop();
      eat_punct("}");
      return QueryExpr::comprehension(var, domain, filter);
    }
    // Replacement: the generator names are bound in the body, which appears
    // first, so pre-scan for them up to the ':' at this brace depth.
    ScopeGuard guard(*this);
    for (const auto& name : scan_generator_names()) scope_.push_back(name);
    QueryExpr body = query();
    eat_punct(":");
    std::vector<Generator> generators;
    {
      // Re-enter generator scope step by step: each domain sees only the
      // generators before it.
      ScopeGuard inner(*this);
      scope_.resize(guard.mark);
      for (;;) {
        std::string var = ident();
        eat_word("in");
        QueryExpr domain = query();
        generators.push_back(Generator{var, domain});
        scope_.push_back(var);
        if (!at_punct(",")) break;
        ++pos_;
      }
    }
    eat_punct("}");
    return desugar(ReplacementForm{std::move(generators), std::move(body)});
  }

  // Collects the variable names of `x in ...` groups between the ':' at the
  // current brace depth and the closing '}', without consuming anything.
  std::vector<std::string> scan_generator_names() const {
    std::vector<std::string> names;
    int depth = 0;
    bool after_colon = false;
    bool at_group_start = false;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == Token::Kind::Punct) {
        if (t.text == "(" || t.text == "{") ++depth;
        if (t.text == ")") --depth;
        if (t.text == "}") {
          if (depth == 0) break;
          --depth;
        }
        if (depth == 0 && t.text == ":") {
          after_colon = true;
          at_group_start = true;
          continue;
        }
        if (depth == 0 && t.text == ",") {
          at_group_start = after_colon;
          continue;
        }
      }
      if (after_colon && at_group_start && t.kind == Token::Kind::Ident &&
          !is_keyword(t.text) && i + 1 < toks_.size() && toks_[i + 1].kind == Token::Kind::Ident &&
          toks_[i + 1].text == "in") {
        names.push_back(t.text);
      }
      at_group_start = false;
    }
    return names;
  }

  // ---- propositions --------------------------------------------------------

  PropExpr prop() {
    PropExpr left = prop_unary();
    while (at_punct("&&")) {
      ++pos_;
      left = PropExpr::conj(left, prop_unary());
    }
    return left;
  }

  PropExpr prop_unary() {
    if (at_punct("!")) {
      ++pos_;
      return PropExpr::negate(prop_unary());
    }
    if (at_word("forall")) {
      ++pos_;
      std::string var = ident();
      eat_word("in");
      QueryExpr domain = query();
      eat_punct(".");
      ScopeGuard guard(*this);
      scope_.push_back(var);
      PropExpr body = prop();
      return PropExpr::forall_in(var, domain, body);
    }
    return prop_atom();
  }

  PropExpr prop_atom() {
    if (at_punct("(")) {
      // Either a parenthesized proposition or a query comparison whose left
      // side is parenthesized; try the comparison reading first.
      std::size_t save = pos_;
      try {
        return comparison();
      } catch (const ParseError&) {
        pos_ = save;
      }
      ++pos_;
      PropExpr p = prop();
      eat_punct(")");
      return p;
    }
    return comparison();
  }

  PropExpr comparison() {
    QueryExpr left = query();
    if (at_punct("==")) {
      ++pos_;
      return PropExpr::pred(kEqualPred, {std::move(left), query()});
    }
    if (at_word("in")) {
      ++pos_;
      return PropExpr::pred(kMemberPred, {std::move(left), query()});
    }
    // A bare application in proposition position is a predicate.
    if (const auto* app = std::get_if<FunApp>(&left.node())) {
      return PropExpr::pred(app->fun, app->args);
    }
    fail("expected a proposition");
  }
};

}  // namespace

QueryExpr parse_query(const std::string& text, const Signature& sig) {
  return Parser(text, sig).query_document();
}

RelExpr parse_rel(const std::string& text, const Signature& sig) {
  return Parser(text, sig).rel_document();
}

PropExpr parse_prop(const std::string& text, const Signature& sig) {
  return Parser(text, sig).prop_document();
}

}  // namespace qmt
