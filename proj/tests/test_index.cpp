#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "qmt/checker.hpp"
#include "qmt/index.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace qmt;
using testgen::EdgeList;
using testgen::uval;

namespace {

EdgeList chain(std::size_t universe, std::initializer_list<std::pair<std::size_t, std::size_t>> r) {
  EdgeList e;
  e.universe = universe;
  for (const auto& p : r) e.edges["r"].insert(p);
  return e;
}

std::set<std::string> texts(const ValueSet& s) {
  std::set<std::string> out;
  for (const auto& v : s) out.insert(v.uri_text());
  return out;
}

}  // namespace

TEST_CASE("index lookups and deterministic listings") {
  EdgeList e = chain(4, {{0, 1}, {1, 2}, {0, 2}});
  e.extents["A"] = {2, 0};
  e.edges["s"].insert({3, 0});
  Index index = build_index(testgen::toy_signature(), testgen::to_facts(e));

  CHECK(index.concepts.extent("A").size() == 2);
  CHECK(index.concepts.extent("A").contains(uval(0)));
  CHECK(index.concepts.extent("B").empty());
  CHECK(index.concepts.extent("nosuch").empty());

  CHECK(texts(index.relations.forward("r", uval(0))) == std::set<std::string>{"u1", "u2"});
  CHECK(texts(index.relations.backward("r", uval(2))) == std::set<std::string>{"u0", "u1"});
  CHECK(index.relations.forward("r", uval(3)).empty());
  CHECK(index.relations.forward("nosuch", uval(0)).empty());

  auto pairs = index.relations.pairs("r");
  CHECK(pairs.size() == 3);
  CHECK(pairs == index.relations.pairs("r"));  // stable order

  auto cnames = index.concepts.names();
  CHECK(std::set<ConceptName>(cnames.begin(), cnames.end()) == std::set<ConceptName>{"A"});
  auto rnames = index.relations.names();
  CHECK(std::set<RelationName>(rnames.begin(), rnames.end()) ==
        std::set<RelationName>{"r", "s"});
}

TEST_CASE("build_index validates names and base type membership") {
  Signature sig = testgen::toy_signature();

  FactSet bad_concept;
  bad_concept.concepts.push_back({"nosuch", uval(0)});
  CHECK_THROWS_AS(build_index(sig, bad_concept), TypeError);

  FactSet bad_rel;
  bad_rel.relations.push_back({"nosuch", uval(0), uval(1)});
  CHECK_THROWS_AS(build_index(sig, bad_rel), TypeError);

  // With membership tests, ill-sorted values are rejected.
  BaseTypeTests tests;
  tests["uri"] = [](const Value& v) { return v.kind() == Value::Kind::Uri; };
  FactSet ill;
  ill.concepts.push_back({"A", Value::xml("<p/>")});
  CHECK_THROWS_AS(build_index(sig, ill, tests), TypeError);

  FactSet fine;
  fine.concepts.push_back({"A", uval(0)});
  CHECK(build_index(sig, fine, tests).concepts.extent("A").size() == 1);
}

TEST_CASE("closure is strict: one step minimum") {
  Index index = build_index(testgen::toy_signature(),
                            testgen::to_facts(chain(3, {{0, 1}, {1, 2}})));
  RelExpr plus = RelExpr::closure(RelExpr::atom("r"));
  CHECK(texts(image(index, plus, uval(0))) == std::set<std::string>{"u1", "u2"});
  CHECK(texts(image(index, plus, uval(1))) == std::set<std::string>{"u2"});
  CHECK(image(index, plus, uval(2)).empty());  // no reflexive step

  // Cycles re-reach the start.
  Index cyc = build_index(testgen::toy_signature(),
                          testgen::to_facts(chain(2, {{0, 1}, {1, 0}})));
  CHECK(texts(image(cyc, plus, uval(0))) == std::set<std::string>{"u0", "u1"});

  // An explicit self loop shows up too.
  Index loop = build_index(testgen::toy_signature(), testgen::to_facts(chain(1, {{0, 0}})));
  CHECK(texts(image(loop, plus, uval(0))) == std::set<std::string>{"u0"});
}

TEST_CASE("operators compose as images") {
  EdgeList e = chain(4, {{0, 1}, {1, 2}});
  e.edges["s"] = {{1, 3}, {0, 1}};
  Index index = build_index(testgen::toy_signature(), testgen::to_facts(e));

  CHECK(texts(image(index, RelExpr::inverse(RelExpr::atom("r")), uval(1))) ==
        std::set<std::string>{"u0"});
  CHECK(texts(image(index, RelExpr::compose(RelExpr::atom("r"), RelExpr::atom("s")), uval(0))) ==
        std::set<std::string>{"u3"});
  CHECK(texts(image(index, RelExpr::set_union(RelExpr::atom("r"), RelExpr::atom("s")), uval(0))) ==
        std::set<std::string>{"u1"});
  CHECK(texts(image(index, RelExpr::intersect(RelExpr::atom("r"), RelExpr::atom("s")), uval(0))) ==
        std::set<std::string>{"u1"});
  CHECK(texts(image(index, RelExpr::diff(RelExpr::atom("s"), RelExpr::atom("r")), uval(1))) ==
        std::set<std::string>{"u3"});
}

TEST_CASE("image memoization returns identical answers") {
  testgen::Rng rng(321);
  EdgeList e = testgen::random_edges(rng, 6, 14);
  Index index = build_index(testgen::toy_signature(), testgen::to_facts(e));
  RelExpr rel = RelExpr::compose(RelExpr::closure(RelExpr::atom("r")),
                                 RelExpr::inverse(RelExpr::atom("s")));
  ImageMemo memo;
  ValueSet first = image(index, rel, uval(0), &memo);
  CHECK_FALSE(memo.empty());
  ValueSet second = image(index, rel, uval(0), &memo);
  CHECK(first == second);
  CHECK(first == image(index, rel, uval(0)));
}

TEST_CASE("random relation expressions match the materialization oracle") {
  testgen::Rng rng(987654);
  for (int round = 0; round < 100; ++round) {
    std::size_t universe = 1 + rng.below(8);
    EdgeList e = testgen::random_edges(rng, universe, 20);
    Index index = build_index(testgen::toy_signature(), testgen::to_facts(e));
    RelExpr rel = testgen::random_rel(rng, 3);
    for (std::size_t source = 0; source < universe; ++source) {
      CHECK(image(index, rel, uval(source)) == oracles::image_oracle(rel, e, source));
    }
  }
}

TEST_CASE("images from values outside the graph are empty") {
  Index index = build_index(testgen::toy_signature(),
                            testgen::to_facts(chain(2, {{0, 1}})));
  CHECK(image(index, RelExpr::atom("r"), uval(17)).empty());
  CHECK(image(index, RelExpr::closure(RelExpr::atom("r")), uval(17)).empty());
}
