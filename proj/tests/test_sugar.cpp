#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstddef>
#include <variant>

#include "qmt/checker.hpp"
#include "qmt/eval.hpp"
#include "qmt/sugar.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace qmt;
using testgen::EdgeList;

namespace {

QueryExpr lit(std::size_t i) { return QueryExpr::literal(testgen::uval(i), "uri"); }

// The four concrete forms the desugaring is exercised with.
ReplacementForm replacement_form() {
  return ReplacementForm{
      {Generator{"x", QueryExpr::concept_ref("A")},
       Generator{"y", QueryExpr::rel_image(RelExpr::atom("r"), QueryExpr::var("x"))}},
      QueryExpr::tuple({QueryExpr::var("x"), QueryExpr::var("y")})};
}

SelectForm select_form() {
  return SelectForm{
      {2, 1},
      desugar_replacement(replacement_form()),
      PropExpr::pred(kMemberPred, {QueryExpr::var("_2"), QueryExpr::concept_ref("B")})};
}

ForLetForm for_let_form() {
  return ForLetForm{
      "x",
      QueryExpr::concept_ref("A"),
      "y",
      QueryExpr::apply("succ", {QueryExpr::var("x")}),
      PropExpr::pred(kMemberPred, {QueryExpr::var("y"), QueryExpr::concept_ref("B")}),
      QueryExpr::rel_image(RelExpr::atom("r"), QueryExpr::var("x"))};
}

DlBoxForm dl_box_form() { return DlBoxForm{"A", RelExpr::atom("r"), QueryExpr::concept_ref("B")}; }

ValueSet eval_set(const Model& model, const QueryExpr& q) {
  auto outcome = eval_query(model, q);
  REQUIRE(outcome.ok());
  REQUIRE(outcome.value->kind() == Value::Kind::Set);
  return outcome.value->members();
}

}  // namespace

TEST_CASE("component variable names") {
  std::size_t index = 99;
  CHECK(is_component_var("_1", &index));
  CHECK(index == 1);
  CHECK(is_component_var("_12", &index));
  CHECK(index == 12);
  CHECK_FALSE(is_component_var("_", nullptr));
  CHECK_FALSE(is_component_var("x1", nullptr));
  CHECK_FALSE(is_component_var("_1a", nullptr));
}

TEST_CASE("predefined symbol names are reserved") {
  CHECK(is_predefined_fun(kSingletonFun));
  CHECK(is_predefined_fun(kUnionFun));
  CHECK(is_predefined_pred(kEqualPred));
  CHECK(is_predefined_pred(kMemberPred));
  CHECK(is_reserved_symbol("union"));
  CHECK(is_reserved_symbol("in"));
  CHECK_FALSE(is_reserved_symbol("unions"));

  Signature bare = Signature::unchecked(testgen::toy_signature_decls());
  CHECK_FALSE(bare.predefined_enabled());
  Signature on = install_predefined(bare);
  CHECK(on.predefined_enabled());
  CHECK_FALSE(bare.predefined_enabled());
}

TEST_CASE("replacement desugars to nested unions of a singleton") {
  QueryExpr out = desugar_replacement(replacement_form());
  const auto* outer = std::get_if<BigUnion>(&out.node());
  REQUIRE(outer != nullptr);
  CHECK(outer->var == "x");
  const auto* inner = std::get_if<BigUnion>(&outer->body.node());
  REQUIRE(inner != nullptr);
  CHECK(inner->var == "y");
  const auto* s = std::get_if<FunApp>(&inner->body.node());
  REQUIRE(s != nullptr);
  CHECK(s->fun == kSingletonFun);

  CHECK_THROWS_AS(desugar_replacement(ReplacementForm{{}, lit(0)}), std::invalid_argument);
}

TEST_CASE("select desugars through a filtered comprehension") {
  QueryExpr out = desugar_select(select_form());
  const auto* u = std::get_if<BigUnion>(&out.node());
  REQUIRE(u != nullptr);
  const auto* comp = std::get_if<Comprehension>(&u->domain.node());
  REQUIRE(comp != nullptr);
  // _2 became a projection of the row variable; no component vars survive.
  CHECK(free_vars(out).empty());

  // The kept components are projections of the union variable.
  const auto* s = std::get_if<FunApp>(&u->body.node());
  REQUIRE(s != nullptr);
  const auto* t = std::get_if<TupleExpr>(&s->args[0].node());
  REQUIRE(t != nullptr);
  REQUIRE(t->items.size() == 2);
  const auto* p0 = std::get_if<Projection>(&t->items[0].node());
  REQUIRE(p0 != nullptr);
  CHECK(p0->index == 2);
}

TEST_CASE("select keeps a single component without a tuple") {
  SelectForm form{{1},
                  desugar_replacement(replacement_form()),
                  PropExpr::pred("good", {QueryExpr::var("_1")})};
  QueryExpr out = desugar_select(form);
  Signature sig = testgen::toy_signature();
  CHECK(infer_query(sig, Context{}, out) == GeneralType::set_of(SimpleType::base("uri")));
}

TEST_CASE("for-let threads the pair variable through filter and body") {
  QueryExpr out = desugar_for_let(for_let_form());
  CHECK(free_vars(out).empty());
  Signature sig = testgen::toy_signature();
  CHECK(infer_query(sig, Context{}, out) == GeneralType::set_of(SimpleType::base("uri")));

  const auto* u = std::get_if<BigUnion>(&out.node());
  REQUIRE(u != nullptr);
  const auto* kept = std::get_if<Comprehension>(&u->domain.node());
  REQUIRE(kept != nullptr);
  CHECK(kept->var == u->var);
}

TEST_CASE("dl box desugars to a guarded comprehension") {
  QueryExpr out = desugar_dl_box(dl_box_form());
  const auto* comp = std::get_if<Comprehension>(&out.node());
  REQUIRE(comp != nullptr);
  const auto* dom = std::get_if<ConceptRef>(&comp->domain.node());
  REQUIRE(dom != nullptr);
  CHECK(dom->name == "A");
  const auto* fa = std::get_if<ForallIn>(&comp->filter.node());
  REQUIRE(fa != nullptr);
  const auto* member = std::get_if<PredApp>(&fa->body.node());
  REQUIRE(member != nullptr);
  CHECK(member->pred == kMemberPred);
}

TEST_CASE("fresh variables dodge the caller's names") {
  // Use "row", "sel", "pair", "x", "y" as real variables; desugaring must not
  // capture them.
  SelectForm tricky{{1},
                    QueryExpr::big_union(
                        "row", QueryExpr::concept_ref("A"),
                        QueryExpr::apply(kSingletonFun,
                                         {QueryExpr::tuple({QueryExpr::var("row"),
                                                            QueryExpr::var("sel")})})),
                    PropExpr::pred("good", {QueryExpr::var("_1")})};
  QueryExpr out = desugar_select(tricky);
  CHECK(free_vars(out) == std::set<VarName>{"sel"});

  DlBoxForm box{"A", RelExpr::atom("r"),
                QueryExpr::apply(kSingletonFun, {QueryExpr::var("x")})};
  QueryExpr boxed = desugar_dl_box(box);
  CHECK(free_vars(boxed) == std::set<VarName>{"x"});
}

TEST_CASE("the sugar dispatch covers all four forms") {
  CHECK(desugar(SugarForm{replacement_form()}) == desugar_replacement(replacement_form()));
  CHECK(desugar(SugarForm{select_form()}) == desugar_select(select_form()));
  CHECK(desugar(SugarForm{for_let_form()}) == desugar_for_let(for_let_form()));
  CHECK(desugar(SugarForm{dl_box_form()}) == desugar_dl_box(dl_box_form()));
}

TEST_CASE("desugared forms match their set-theoretic oracles on sampled models") {
  testgen::Rng rng(424242);
  for (int round = 0; round < 40; ++round) {
    std::size_t universe = rng.below(7);
    EdgeList edges = testgen::random_edges(rng, universe, 12);
    Model model = testgen::toy_model(edges);

    CHECK(eval_set(model, desugar_replacement(replacement_form())) ==
          oracles::replacement_oracle(edges));
    CHECK(eval_set(model, desugar_select(select_form())) == oracles::select_oracle(edges));
    CHECK(eval_set(model, desugar_for_let(for_let_form())) == oracles::for_let_oracle(edges));
    CHECK(eval_set(model, desugar_dl_box(dl_box_form())) == oracles::dl_box_oracle(edges));
  }
}

TEST_CASE("singleton helper wraps the predefined symbol") {
  QueryExpr s = singleton(lit(3));
  const auto* app = std::get_if<FunApp>(&s.node());
  REQUIRE(app != nullptr);
  CHECK(app->fun == kSingletonFun);
  REQUIRE(app->args.size() == 1);
}
