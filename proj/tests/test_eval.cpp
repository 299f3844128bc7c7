#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "qmt/checker.hpp"
#include "qmt/eval.hpp"
#include "qmt/sugar.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace qmt;
using testgen::EdgeList;
using testgen::uval;

namespace {

QueryExpr lit(std::size_t i) { return QueryExpr::literal(uval(i), "uri"); }

EdgeList base_edges() {
  EdgeList e;
  e.universe = 4;
  e.extents["A"] = {0, 1, 2};
  e.extents["B"] = {1, 3};
  e.edges["r"] = {{0, 1}, {1, 2}, {2, 0}};
  e.edges["s"] = {{0, 3}};
  return e;
}

}  // namespace

TEST_CASE("concepts, literals, and host functions evaluate") {
  Model model = testgen::toy_model(base_edges());

  auto a = eval_query(model, QueryExpr::concept_ref("A"));
  REQUIRE(a.ok());
  CHECK(a.value->members().size() == 3);

  auto in_universe = eval_query(model, lit(2));
  REQUIRE(in_universe.ok());
  CHECK(*in_universe.value == uval(2));

  auto out_of_universe = eval_query(model, lit(9));
  CHECK_FALSE(out_of_universe.ok());
  REQUIRE(out_of_universe.undefined.has_value());
  CHECK(out_of_universe.undefined->symbol == "literal");
  CHECK(out_of_universe.undefined->note.find("universe") != std::string::npos);

  auto next = eval_query(model, QueryExpr::apply("succ", {lit(3)}));
  REQUIRE(next.ok());
  CHECK(*next.value == uval(0));
}

TEST_CASE("undefined propagates strictly through every construct") {
  Model model = testgen::toy_model(base_edges());
  QueryExpr bad = lit(9);

  CHECK_FALSE(eval_query(model, QueryExpr::apply("succ", {bad})).ok());
  CHECK_FALSE(eval_query(model, QueryExpr::tuple({lit(0), bad})).ok());
  CHECK_FALSE(eval_query(model, QueryExpr::proj(QueryExpr::tuple({lit(0), bad}), 1)).ok());
  CHECK_FALSE(eval_query(model, QueryExpr::rel_image(RelExpr::atom("r"), bad)).ok());
  CHECK_FALSE(eval_query(model, QueryExpr::apply(kSingletonFun, {bad})).ok());
  CHECK_FALSE(eval_query(model,
                         QueryExpr::apply(kUnionFun,
                                          {QueryExpr::concept_ref("A"),
                                           QueryExpr::apply(kSingletonFun, {bad})}))
                  .ok());
  // Domain failures surface even when the body never uses the variable.
  CHECK_FALSE(eval_query(model, QueryExpr::big_union(
                                    "x", QueryExpr::apply(kSingletonFun, {bad}),
                                    QueryExpr::concept_ref("A")))
                  .ok());
  // Body failures surface per element under both modes.
  QueryExpr bad_body = QueryExpr::big_union("x", QueryExpr::concept_ref("A"),
                                            QueryExpr::apply(kSingletonFun, {bad}));
  CHECK_FALSE(eval_query(model, bad_body).ok());
  CHECK_FALSE(eval_query(model, bad_body, EvalOptions{true}).ok());
}

TEST_CASE("missing interpretations report no-interpretation") {
  Model model = testgen::toy_model(base_edges());
  // Declared but uninterpreted symbols: extend the signature by hand.
  auto decls = model.signature.decls();
  decls.push_back(FunctionDecl{"mystery",
                               {GeneralType::elem(SimpleType::base("uri"))},
                               GeneralType::elem(SimpleType::base("uri"))});
  decls.push_back(PredicateDecl{"riddle", {GeneralType::elem(SimpleType::base("uri"))}});
  model.signature = Signature::unchecked(decls);
  model.signature.enable_predefined();

  auto fun = eval_query(model, QueryExpr::apply("mystery", {lit(0)}));
  CHECK_FALSE(fun.ok());
  REQUIRE(fun.undefined.has_value());
  CHECK(fun.undefined->symbol == "mystery");
  CHECK(fun.undefined->note.find("no interpretation") != std::string::npos);

  auto pred = eval_prop(model, Context{}, Assignment{},
                        PropExpr::pred("riddle", {lit(0)}));
  CHECK_FALSE(pred.ok());
  REQUIRE(pred.undefined.has_value());
  CHECK(pred.undefined->note.find("no interpretation") != std::string::npos);
}

TEST_CASE("tuples, projections, and images") {
  Model model = testgen::toy_model(base_edges());

  auto t = eval_query(model, QueryExpr::tuple({lit(0), QueryExpr::apply("succ", {lit(0)})}));
  REQUIRE(t.ok());
  CHECK(*t.value == Value::tuple({uval(0), uval(1)}));

  auto p = eval_query(model, QueryExpr::proj(QueryExpr::tuple({lit(2), lit(3)}), 2));
  REQUIRE(p.ok());
  CHECK(*p.value == uval(3));

  auto img = eval_query(model, QueryExpr::rel_image(RelExpr::closure(RelExpr::atom("r")), lit(0)));
  REQUIRE(img.ok());
  ValueSet expected;
  expected.insert(uval(0));
  expected.insert(uval(1));
  expected.insert(uval(2));
  CHECK(img.value->members() == expected);
}

TEST_CASE("big union merges the per-element sets") {
  Model model = testgen::toy_model(base_edges());
  QueryExpr q = QueryExpr::big_union(
      "x", QueryExpr::concept_ref("A"),
      QueryExpr::rel_image(RelExpr::atom("r"), QueryExpr::var("x")));
  auto out = eval_query(model, q);
  REQUIRE(out.ok());
  ValueSet expected;  // images of 0, 1, 2 under r
  expected.insert(uval(1));
  expected.insert(uval(2));
  expected.insert(uval(0));
  CHECK(out.value->members() == expected);
}

TEST_CASE("comprehension filters strictly or leniently") {
  Model model = testgen::toy_model(base_edges());
  // The filter is undefined whenever x == u9 is evaluated (u9 is outside the
  // universe), which happens for every element.
  QueryExpr q = QueryExpr::comprehension(
      "x", QueryExpr::concept_ref("A"),
      PropExpr::pred(kEqualPred, {QueryExpr::var("x"), lit(9)}));

  auto strict = eval_query(model, q);
  CHECK_FALSE(strict.ok());
  CHECK(strict.undefined->symbol == "literal");

  auto lenient = eval_query(model, q, EvalOptions{true});
  REQUIRE(lenient.ok());
  CHECK(lenient.value->members().empty());

  // A defined filter behaves identically in both modes.
  QueryExpr fine = QueryExpr::comprehension(
      "x", QueryExpr::concept_ref("A"), PropExpr::pred("good", {QueryExpr::var("x")}));
  auto strict_fine = eval_query(model, fine);
  auto lenient_fine = eval_query(model, fine, EvalOptions{true});
  REQUIRE(strict_fine.ok());
  REQUIRE(lenient_fine.ok());
  CHECK(*strict_fine.value == *lenient_fine.value);
  ValueSet evens;
  evens.insert(uval(0));
  evens.insert(uval(2));
  CHECK(strict_fine.value->members() == evens);
}

TEST_CASE("propositions: connectives, quantifier, and lenient bodies") {
  Model model = testgen::toy_model(base_edges());
  Context ctx;
  Assignment env;

  auto holds = [&](const PropExpr& p, EvalOptions opts = {}) {
    auto out = eval_prop(model, ctx, env, p, opts);
    REQUIRE(out.ok());
    return *out.value;
  };

  CHECK(holds(PropExpr::pred("good", {lit(0)})));
  CHECK_FALSE(holds(PropExpr::pred("good", {lit(1)})));
  CHECK(holds(PropExpr::negate(PropExpr::pred("good", {lit(1)}))));
  CHECK(holds(PropExpr::conj(PropExpr::pred("good", {lit(0)}),
                             PropExpr::pred("good", {lit(2)}))));
  CHECK_FALSE(holds(PropExpr::conj(PropExpr::pred("good", {lit(0)}),
                                   PropExpr::pred("good", {lit(1)}))));
  CHECK(holds(PropExpr::pred(kEqualPred, {lit(1), lit(1)})));
  CHECK_FALSE(holds(PropExpr::pred(kEqualPred, {lit(1), lit(2)})));
  CHECK(holds(PropExpr::pred(kMemberPred, {lit(1), QueryExpr::concept_ref("B")})));
  CHECK_FALSE(holds(PropExpr::pred(kMemberPred, {lit(0), QueryExpr::concept_ref("B")})));

  // Universal quantification over an empty domain holds vacuously.
  QueryExpr empty = QueryExpr::concept_ref("C");
  CHECK(holds(PropExpr::forall_in("x", empty, PropExpr::pred(kEqualPred,
                                                             {QueryExpr::var("x"), lit(9)}))));

  // Undefined quantifier bodies: strict poisons, lenient reads as false.
  PropExpr shaky = PropExpr::forall_in(
      "x", QueryExpr::concept_ref("A"),
      PropExpr::pred(kEqualPred, {QueryExpr::var("x"), lit(9)}));
  auto strict = eval_prop(model, ctx, env, shaky);
  CHECK_FALSE(strict.ok());
  CHECK_FALSE(holds(shaky, EvalOptions{true}));
}

TEST_CASE("open queries evaluate under an assignment") {
  Model model = testgen::toy_model(base_edges());
  Context ctx = Context{}.extended("x", SimpleType::base("uri"));
  Assignment env = Assignment{}.extended("x", uval(1));
  auto out = eval_query(model, ctx, env, QueryExpr::apply("succ", {QueryExpr::var("x")}));
  REQUIRE(out.ok());
  CHECK(*out.value == uval(2));

  // Shadowing picks the innermost binding.
  Context ctx2 = ctx.extended("x", SimpleType::base("uri"));
  Assignment env2 = env.extended("x", uval(3));
  auto inner = eval_query(model, ctx2, env2, QueryExpr::var("x"));
  REQUIRE(inner.ok());
  CHECK(*inner.value == uval(3));
}

TEST_CASE("evaluation rejects ill-typed and open queries") {
  Model model = testgen::toy_model(base_edges());
  CHECK_THROWS_AS(eval_query(model, QueryExpr::var("x")), TypeError);
  CHECK_THROWS_AS(eval_query(model, QueryExpr::apply("succ", {QueryExpr::concept_ref("A")})),
                  TypeError);
  CHECK_THROWS_AS(eval_query(model, QueryExpr::concept_ref("nosuch")), TypeError);
}

TEST_CASE("results are deterministic across repeated evaluation") {
  testgen::Rng rng(5150);
  EdgeList e = testgen::random_edges(rng, 5, 10);
  Model model = testgen::toy_model(e);
  QueryExpr q = QueryExpr::big_union(
      "x", QueryExpr::concept_ref("A"),
      QueryExpr::rel_image(RelExpr::closure(RelExpr::set_union(RelExpr::atom("r"),
                                                               RelExpr::atom("s"))),
                           QueryExpr::var("x")));
  auto first = eval_query(model, q);
  auto second = eval_query(model, q);
  REQUIRE(first.ok());
  REQUIRE(second.ok());
  CHECK(*first.value == *second.value);
  CHECK(to_text(*first.value) == to_text(*second.value));
}

TEST_CASE("evaluation matches inferred types on random queries") {
  testgen::Rng rng(31337);
  int ok_count = 0;
  for (int round = 0; round < 150; ++round) {
    std::size_t universe = rng.below(6);
    EdgeList e = testgen::random_edges(rng, universe, 10);
    Model model = testgen::toy_model(e);
    testgen::QueryGen gen(rng, universe);
    QueryExpr q = gen.closed_set_query(3);
    GeneralType type = infer_query(model.signature, Context{}, q);
    for (bool lenient : {false, true}) {
      auto out = eval_query(model, q, EvalOptions{lenient});
      if (out.ok()) {
        ++ok_count;
        CHECK(oracles::conforms(type, *out.value));
      } else {
        CHECK(out.undefined.has_value());
      }
    }
  }
  CHECK(ok_count > 0);  // the generator produces plenty of defined queries
}
