#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qmt/library.hpp"
#include "qmt/unify.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace qmt;
using namespace qmt::mmt;

namespace {

Object S(const char* u) { return Object::sym(Uri(u)); }
Object V(const char* n) { return Object::var(n); }

Object bind1(const char* binder, const char* var, Object body) {
  return Object::bind(S(binder), {BoundVar{var, std::nullopt}}, std::move(body));
}

std::set<std::string> keys_of(const std::vector<oracles::SubOccurrence>& occ) {
  std::set<std::string> out;
  for (const auto& o : occ) out.insert(alpha_key(wrap_free(o.scope, o.subobject)));
  return out;
}

std::set<std::string> hit_keys(const std::vector<UnifyHit>& hits) {
  std::set<std::string> out;
  for (const auto& h : hits) {
    out.insert(h.location.str() + "\n" + alpha_key(h.matched) + "\n" +
               alpha_key(h.substitution));
  }
  return out;
}

std::set<std::string> hit_keys(const std::vector<oracles::OracleHit>& hits) {
  std::set<std::string> out;
  for (const auto& h : hits) {
    out.insert(h.location.str() + "\n" + alpha_key(h.matched) + "\n" +
               alpha_key(h.substitution));
  }
  return out;
}

}  // namespace

TEST_CASE("subobject enumeration: heads stay attached, binders contribute scope") {
  // h(a): the head h is not a standalone occurrence.
  Object app = Object::app(S("m?h"), {S("m?a")});
  std::vector<std::pair<std::string, std::size_t>> seen;
  for_each_subobject(app, [&](const Object& sub, const std::vector<BoundVar>& scope) {
    seen.emplace_back(alpha_key(sub), scope.size());
  });
  REQUIRE(seen.size() == 2);
  CHECK(seen[0].first == alpha_key(app));
  CHECK(seen[1].first == alpha_key(S("m?a")));

  // Binder: the bind node itself, the context type (with empty scope), and
  // the body (with one variable in scope).
  Object b = Object::bind(S("m?b"), {BoundVar{"x", S("m?T")}},
                          Object::app(S("m?h"), {V("x")}));
  std::vector<std::pair<std::string, std::size_t>> parts;
  for_each_subobject(b, [&](const Object& sub, const std::vector<BoundVar>& scope) {
    parts.emplace_back(to_text(sub), scope.size());
  });
  // bind, type T (scope 0), h(x) (scope 1), x (scope 1)
  REQUIRE(parts.size() == 4);
  CHECK(parts[0].second == 0);
  CHECK(parts[1].second == 0);
  CHECK(parts[2].second == 1);
  CHECK(parts[3].second == 1);

  // Free wrappers add scope without being visited.
  Object wrapped = wrap_free({BoundVar{"g", std::nullopt}},
                             Object::app(S("m?h"), {V("g")}));
  std::size_t count = 0;
  for_each_subobject(wrapped, [&](const Object& sub, const std::vector<BoundVar>& scope) {
    ++count;
    CHECK(scope.size() == 1);
    CHECK(sub.kind() != Object::Kind::Bind);
  });
  CHECK(count == 2);
}

TEST_CASE("engine walk agrees with the independent enumerator on random objects") {
  testgen::Rng rng(8080);
  for (int round = 0; round < 120; ++round) {
    Object o = testgen::random_closed_object(rng, 4, 35);
    std::set<std::string> engine;
    for_each_subobject(o, [&](const Object& sub, const std::vector<BoundVar>& scope) {
      engine.insert(alpha_key(wrap_free(scope, sub)));
    });
    CHECK(engine == keys_of(oracles::enumerate_subobjects(o)));
  }
}

TEST_CASE("head symbols") {
  CHECK(head_symbol(S("m?c")) == Uri("m?c"));
  CHECK(head_symbol(Object::app(S("m?h"), {S("m?a")})) == Uri("m?h"));
  CHECK(head_symbol(bind1("m?b", "x", V("x"))) == Uri("m?b"));
  CHECK_FALSE(head_symbol(V("x")).has_value());
  CHECK_FALSE(head_symbol(Object::app(V("f"), {S("m?a")})).has_value());
  CHECK_FALSE(head_symbol(Object::lit("integer", "1")).has_value());
}

TEST_CASE("the subterm index narrows by head") {
  Library lib = library_from_json_text(R"({"theories": [
    {"uri": "m", "includes": [], "constants": [
      {"uri": "m?c", "type": {"OMA": [{"OMS": "m?h"}, {"OMS": "m?a"}]},
       "def": {"OMS": "m?a"}}
    ]}
  ], "views": [], "styles": []})");
  SubtermIndex index = SubtermIndex::build(lib);
  // Subobjects: h(a), a (in the type), a (in the def).
  CHECK(index.entries().size() == 3);

  auto h_candidates = index.candidates(Uri("m?h"));
  CHECK(h_candidates.size() == 1);
  auto a_candidates = index.candidates(Uri("m?a"));
  CHECK(a_candidates.size() == 2);
  auto all = index.candidates(std::nullopt);
  CHECK(all.size() == 3);
  CHECK(index.candidates(Uri("m?zz")).empty());
}

TEST_CASE("ground matching is alpha equality") {
  Object pat = bind1("m?b", "x", V("x"));
  Object cand = bind1("m?b", "y", V("y"));
  auto got = match_first_order(pat, {}, cand);
  REQUIRE(got.has_value());
  CHECK(got->empty());

  CHECK_FALSE(match_first_order(pat, {}, bind1("m?b", "y", S("m?a"))).has_value());
  CHECK_FALSE(match_first_order(S("m?a"), {}, S("m?b")).has_value());
  CHECK(match_first_order(Object::lit("integer", "7"), {}, Object::lit("integer", "7"))
            .has_value());
}

TEST_CASE("metavariables bind subterms consistently") {
  // f(M, M) matches f(a, a) but not f(a, b).
  Object pat = Object::app(S("m?f"), {V("M"), V("M")});
  Object good = Object::app(S("m?f"), {S("m?a"), S("m?a")});
  Object bad = Object::app(S("m?f"), {S("m?a"), S("m?b")});

  auto got = match_first_order(pat, {"M"}, good);
  REQUIRE(got.has_value());
  REQUIRE(got->size() == 1);
  CHECK((*got)[0].first == "M");
  CHECK(alpha_equal((*got)[0].second, S("m?a")));
  CHECK_FALSE(match_first_order(pat, {"M"}, bad).has_value());

  // Consistency is up to alpha equality.
  Object alpha_pair = Object::app(
      S("m?f"), {bind1("m?b", "x", V("x")), bind1("m?b", "y", V("y"))});
  CHECK(match_first_order(pat, {"M"}, alpha_pair).has_value());

  // Bindings come back in metavariable order, restricted to those that occur.
  Object two = Object::app(S("m?f"), {V("N"), V("N")});
  auto ordered = match_first_order(two, {"M", "N"}, good);
  REQUIRE(ordered.has_value());
  REQUIRE(ordered->size() == 1);
  CHECK((*ordered)[0].first == "N");
}

TEST_CASE("bound variables correspond positionally and never escape") {
  // \x. M cannot bind M := x (the binder-local x would escape).
  Object pat = bind1("m?b", "v", V("M"));
  Object leaky = bind1("m?b", "x", V("x"));
  CHECK_FALSE(match_first_order(pat, {"M"}, leaky).has_value());

  // ...but a constant body is fine.
  Object closed = bind1("m?b", "x", S("m?a"));
  auto got = match_first_order(pat, {"M"}, closed);
  REQUIRE(got.has_value());
  CHECK(alpha_equal((*got)[0].second, S("m?a")));

  // Candidate-side free variables (e.g. an outer context) may be bound.
  auto free_ok = match_first_order(V("M"), {"M"}, V("g"));
  REQUIRE(free_ok.has_value());
  CHECK(alpha_equal((*free_ok)[0].second, V("g")));

  // Plain pattern variables must meet the same name, free on both sides.
  CHECK(match_first_order(V("z"), {}, V("z")).has_value());
  CHECK_FALSE(match_first_order(V("z"), {}, V("w")).has_value());
  CHECK_FALSE(match_first_order(bind1("m?b", "x", V("z")), {},
                                bind1("m?b", "z", V("z")))
                  .has_value());

  // Positional correspondence: \x y. x matches \a b. a, not \a b. b.
  Object pat2 = Object::bind(S("m?b"), {BoundVar{"x", std::nullopt}, BoundVar{"y", std::nullopt}},
                             V("x"));
  Object c1 = Object::bind(S("m?b"), {BoundVar{"a", std::nullopt}, BoundVar{"b", std::nullopt}},
                           V("a"));
  Object c2 = Object::bind(S("m?b"), {BoundVar{"a", std::nullopt}, BoundVar{"b", std::nullopt}},
                           V("b"));
  CHECK(match_first_order(pat2, {}, c1).has_value());
  CHECK_FALSE(match_first_order(pat2, {}, c2).has_value());
}

TEST_CASE("binder contexts must agree in length, annotations, and binder") {
  Object untyped = bind1("m?b", "x", V("x"));
  Object typed = Object::bind(S("m?b"), {BoundVar{"x", S("m?T")}}, V("x"));
  CHECK_FALSE(match_first_order(untyped, {}, typed).has_value());
  CHECK_FALSE(match_first_order(typed, {}, untyped).has_value());
  CHECK(match_first_order(typed, {}, typed).has_value());

  // Metavariables reach into type annotations.
  Object pat = Object::bind(S("m?b"), {BoundVar{"x", V("M")}}, V("x"));
  auto got = match_first_order(pat, {"M"}, typed);
  REQUIRE(got.has_value());
  CHECK(alpha_equal((*got)[0].second, S("m?T")));

  Object other_binder = Object::bind(S("m?c"), {BoundVar{"x", std::nullopt}}, V("x"));
  CHECK_FALSE(match_first_order(untyped, {}, other_binder).has_value());

  Object two_vars = Object::bind(S("m?b"),
                                 {BoundVar{"x", std::nullopt}, BoundVar{"y", std::nullopt}},
                                 V("x"));
  CHECK_FALSE(match_first_order(untyped, {}, two_vars).has_value());
}

TEST_CASE("metavariable-headed applications never match") {
  Object pat = Object::app(V("M"), {S("m?a")});
  Object cand = Object::app(S("m?f"), {S("m?a")});
  CHECK_FALSE(match_first_order(pat, {"M"}, cand).has_value());
  // Even against an alpha-identical shape.
  CHECK_FALSE(match_first_order(pat, {"M"}, Object::app(V("M"), {S("m?a")})).has_value());
}

TEST_CASE("substitutions encode with the reserved vocabulary") {
  Object empty = encode_substitution({});
  CHECK(empty.kind() == Object::Kind::Sym);
  CHECK(empty.sym_uri() == subst_uri());

  Object one = encode_substitution({{"M", S("m?a")}});
  REQUIRE(one.kind() == Object::Kind::App);
  CHECK(one.head().sym_uri() == subst_uri());
  REQUIRE(one.args().size() == 1);
  const Object& pair = one.args()[0];
  CHECK(pair.head().sym_uri() == pair_uri());
  CHECK(pair.args()[0].var_name() == "M");
  CHECK(alpha_equal(pair.args()[1], S("m?a")));

  CHECK(alpha_equal(one, oracles::encode_subst_oracle({{"M", S("m?a")}})));
}

TEST_CASE("unify_against finds and deduplicates hits") {
  Library lib = library_from_json_text(R"({"theories": [
    {"uri": "m", "includes": [], "constants": [
      {"uri": "m?f"}, {"uri": "m?a"}, {"uri": "m?b"},
      {"uri": "m?c1", "def": {"OMA": [{"OMS": "m?f"}, {"OMS": "m?a"}]}},
      {"uri": "m?c2",
       "type": {"OMA": [{"OMS": "m?f"}, {"OMS": "m?a"}]},
       "def": {"OMA": [{"OMS": "m?f"}, {"OMS": "m?b"}]}}
    ]}
  ], "views": [], "styles": []})");
  SubtermIndex index = SubtermIndex::build(lib);

  // Ground query: alpha-equal occurrences only.
  Object ground = Object::app(S("m?f"), {S("m?a")});
  auto ground_hits = unify_against(index, ground);
  std::set<std::string> locations;
  for (const auto& h : ground_hits) {
    locations.insert(h.location.str());
    CHECK(alpha_equal(h.matched, ground));
    CHECK(h.substitution.kind() == Object::Kind::Sym);
  }
  CHECK(locations == std::set<std::string>{"m?c1", "m?c2"});

  // One metavariable: f(M) matches both bodies; m?c2 contributes two distinct
  // hits (different bindings), m?c1 one.
  Object pat = wrap_free({BoundVar{"M", std::nullopt}},
                         Object::app(S("m?f"), {V("M")}));
  auto hits = unify_against(index, pat);
  CHECK(hits.size() == 3);

  // The same subterm twice in one constant is a single hit.
  Library twice = library_from_json_text(R"({"theories": [
    {"uri": "m", "includes": [], "constants": [
      {"uri": "m?g"}, {"uri": "m?a"},
      {"uri": "m?c", "def": {"OMA": [{"OMS": "m?g"}, {"OMS": "m?a"}, {"OMS": "m?a"}]}}
    ]}
  ], "views": [], "styles": []})");
  auto dedup_hits = unify_against(SubtermIndex::build(twice), S("m?a"));
  CHECK(dedup_hits.size() == 1);
}

TEST_CASE("unify agrees with the brute-force oracle on random libraries") {
  testgen::Rng rng(600613);
  for (int round = 0; round < 12; ++round) {
    Library lib = testgen::random_library(rng, 40);
    SubtermIndex index = SubtermIndex::build(lib);
    for (int q = 0; q < 6; ++q) {
      Object query = testgen::random_pattern(rng, 3, 16);
      auto engine = unify_against(index, query);
      auto oracle = oracles::brute_unify(lib, query);
      CHECK(hit_keys(engine) == hit_keys(oracle));
    }
  }
}

TEST_CASE("every hit re-verifies by capture-avoiding substitution") {
  testgen::Rng rng(271828);
  int verified = 0;
  for (int round = 0; round < 12; ++round) {
    Library lib = testgen::random_library(rng, 40);
    SubtermIndex index = SubtermIndex::build(lib);
    for (int q = 0; q < 6; ++q) {
      Object query = testgen::random_pattern(rng, 3, 16);
      auto [metactx, pattern] = split_free(query);
      for (const auto& hit : unify_against(index, query)) {
        auto submap = oracles::decode_subst(hit.substitution);
        Object applied = oracles::apply_subst(pattern, submap);
        auto [scope, body] = split_free(hit.matched);
        (void)body;
        Object rebuilt = wrap_free(scope, applied);
        CHECK(alpha_equal(rebuilt, hit.matched));
        ++verified;
      }
    }
  }
  CHECK(verified > 0);
}
