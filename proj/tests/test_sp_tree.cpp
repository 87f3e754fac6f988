#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "mintb/random_instances.hpp"
#include "mintb/sp_tree.hpp"

using namespace mintb;

namespace {

std::set<EdgeId> edge_ids(const Multigraph& g) {
  std::set<EdgeId> out;
  for (const Edge& e : g.edges()) out.insert(e.id);
  return out;
}

}  // namespace

TEST_CASE("term parsing round-trips through the canonical form") {
  CHECK(to_term(parse_term("e(a)")) == "e(a)");
  CHECK(to_term(parse_term("B(a,b,c)")) == "B(a,b,c)");
  CHECK(to_term(parse_term("S(e(a),P(e(b),B(c,d)))")) == "S(e(a),P(e(b),B(c,d)))");
  CHECK(to_term(parse_term(" S( e(a) , P( e(b), B( c , d ) ) ) ")) ==
        "S(e(a),P(e(b),B(c,d)))");
}

TEST_CASE("term parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_term(""), parse_error);
  CHECK_THROWS_AS(parse_term("e()"), parse_error);
  CHECK_THROWS_AS(parse_term("Q(e(a),e(b))"), parse_error);
  CHECK_THROWS_AS(parse_term("S(e(a))"), parse_error);
  CHECK_THROWS_AS(parse_term("e(a))"), parse_error);      // trailing input
  CHECK_THROWS_AS(parse_term("P(e(a),e(a))"), parse_error);  // duplicate edge id
  CHECK_THROWS_AS(parse_term("S(e(a),e(b)"), parse_error);   // missing ')'
}

TEST_CASE("tree validation catches structural damage") {
  SPTree t = parse_term("S(e(a),e(b))");
  SUBCASE("no root") {
    SPTree empty;
    CHECK_THROWS_AS(validate_tree(empty), validation_error);
  }
  SUBCASE("series children must share the midpoint") {
    t.nodes[0].sink = "elsewhere";  // left child no longer meets the right one
    CHECK_THROWS_AS(validate_tree(t), validation_error);
  }
  SUBCASE("leaf bundles must be nonempty") {
    t.nodes[0].edges.clear();
    CHECK_THROWS_AS(validate_tree(t), validation_error);
  }
  SUBCASE("edge ids must be globally unique") {
    t.nodes[1].edges = {"a"};
    CHECK_THROWS_AS(validate_tree(t), validation_error);
  }
  SUBCASE("inner nodes carry no edges") {
    t.nodes[2].edges = {"x"};
    CHECK_THROWS_AS(validate_tree(t), validation_error);
  }
}

TEST_CASE("flatten expands terms into multigraphs with synthesized names") {
  Multigraph g = flatten(parse_term("S(e(a),e(b))"));
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_node("s"));
  CHECK(g.has_node("t"));
  CHECK(g.has_node("m1"));
  const Edge& a = g.edge(g.edge_index("a"));
  CHECK(a.u == "s");
  CHECK(a.v == "m1");
  const Edge& b = g.edge(g.edge_index("b"));
  CHECK(b.u == "m1");
  CHECK(b.v == "t");

  Multigraph bundle = flatten(parse_term("B(x,y)"));
  CHECK(bundle.node_count() == 2);
  CHECK(bundle.edge_count() == 2);
}

TEST_CASE("recognition rebuilds parse trees from graphs") {
  SUBCASE("parallel links fuse into one bundle") {
    Multigraph g({"s", "t"}, {{"e1", "s", "t"}, {"e2", "s", "t"}});
    auto t = recognize(g, "s", "t");
    REQUIRE(t.has_value());
    CHECK(to_term(*t) == "B(e1,e2)");
    CHECK(t->node(t->root).source == "s");
    CHECK(t->node(t->root).sink == "t");
  }
  SUBCASE("triangle: an edge in parallel with a two-edge chain") {
    Multigraph g({"s", "m", "t"},
                 {{"st", "s", "t"}, {"sm", "s", "m"}, {"mt", "m", "t"}});
    auto t = recognize(g, "s", "t");
    REQUIRE(t.has_value());
    CHECK(to_term(*t) == "P(e(st),S(e(sm),e(mt)))");
    CHECK(edge_ids(flatten(*t)) == edge_ids(g));
  }
  SUBCASE("orientation follows the requested terminals") {
    Multigraph g({"s", "m", "t"}, {{"sm", "s", "m"}, {"mt", "m", "t"}});
    auto forward = recognize(g, "s", "t");
    REQUIRE(forward.has_value());
    CHECK(to_term(*forward) == "S(e(sm),e(mt))");
    auto backward = recognize(g, "t", "s");
    REQUIRE(backward.has_value());
    CHECK(to_term(*backward) == "S(e(mt),e(sm))");
    CHECK(backward->node(backward->root).source == "t");
  }
  SUBCASE("the bridge network is not series-parallel") {
    Multigraph g({"s", "a", "b", "t"},
                 {{"sa", "s", "a"},
                  {"sb", "s", "b"},
                  {"ab", "a", "b"},
                  {"at", "a", "t"},
                  {"bt", "b", "t"}});
    CHECK_FALSE(recognize(g, "s", "t").has_value());
  }
  SUBCASE("series-parallel only between the right terminals") {
    Multigraph g({"s", "m", "t"}, {{"sm", "s", "m"}, {"mt", "m", "t"}});
    CHECK_FALSE(recognize(g, "s", "m").has_value());  // t dangles
  }
  SUBCASE("empty graphs and equal terminals are rejected") {
    CHECK_FALSE(recognize(Multigraph({"s", "t"}, {}), "s", "t").has_value());
    Multigraph g({"s", "t"}, {{"e", "s", "t"}});
    CHECK_THROWS_AS(recognize(g, "s", "s"), validation_error);
  }
}

TEST_CASE("normalize merges sibling single-link components into bundles") {
  CHECK(to_term(normalize(parse_term("P(P(e(a),e(b)),e(c))"))) == "B(a,b,c)");
  CHECK(to_term(normalize(parse_term("P(e(a),P(S(e(b),e(c)),e(d)))"))) ==
        "P(B(a,d),S(e(b),e(c)))");
  CHECK(to_term(normalize(parse_term("S(e(a),e(b))"))) == "S(e(a),e(b))");
}

TEST_CASE("flipping swaps the orientation and series order") {
  SPTree t = parse_term("S(e(a),P(e(b),e(c)))");
  SPTree f = flipped(t);
  CHECK(to_term(f) == "S(P(e(b),e(c)),e(a))");
  CHECK(f.node(f.root).source == "t");
  CHECK(f.node(f.root).sink == "s");
  validate_tree(f);
}

TEST_CASE("random trees survive flatten + recognize") {
  Rng rng(20260815);
  for (int round = 0; round < 25; ++round) {
    SPTree t = random_sp_tree(rng, rng.uniform(1, 12));
    Multigraph g = flatten(t);
    auto back = recognize(g, "s", "t");
    REQUIRE(back.has_value());
    CHECK(edge_ids(flatten(*back)) == edge_ids(g));
    CHECK(back->node(back->root).source == "s");
    CHECK(back->node(back->root).sink == "t");
  }
}

TEST_CASE("annotation splits player paths over the tree") {
  Game g = testing::load_game("twolink_game.json");
  State s = testing::load_state("twolink_state.json");
  auto tree = recognize(g.graph(), "s", "t");
  REQUIRE(tree.has_value());
  Annotation ann = annotate(*tree, g, s);
  REQUIRE(ann.node_players.size() == 1);  // single bundle leaf
  CHECK(ann.node_players[0].size() == 2);
  CHECK(ann.cost_of(tree->root, 1) == Rational(2));
  CHECK(ann.cost_of(tree->root, 2) == Rational(5));
  CHECK(ann.cmax[tree->root] == Rational(5));
  CHECK(ann.loads[g.graph().edge_index("e1")] == 1);
  CHECK(ann.loads[g.graph().edge_index("e2")] == 1);
  CHECK_THROWS_AS(ann.cost_of(tree->root, 9), internal_error);
}

TEST_CASE("annotation on a series chain records per-node partial costs") {
  SPTree tree = parse_term("S(e(a),e(b))");
  Game g(flatten(tree), {{1, "s", "t"}, {2, "s", "t"}},
         {{Rational(1), Rational(3), Rational(4)}, {Rational(2), Rational(2), Rational(2)}});
  State s(std::map<PlayerId, Path>{{1, {"a", "b"}}, {2, {"a", "b"}}});
  Annotation ann = annotate(tree, g, s);
  // Leaves were parsed before the series root, so the root is index 2.
  CHECK(ann.cost_of(tree.root, 1) == Rational(5));  // 3 at load 2, plus 2
  CHECK(ann.cmax[tree.root] == Rational(5));
  int leaf_a = 0;
  CHECK(ann.cost_of(leaf_a, 1) == Rational(3));
  CHECK(ann.loads[g.graph().edge_index("a")] == 2);
}

TEST_CASE("annotation rejects mismatched trees and asymmetric games") {
  Game g = testing::load_game("twolink_game.json");
  State s = testing::load_state("twolink_state.json");
  auto tree = recognize(g.graph(), "s", "t");
  REQUIRE(tree.has_value());

  SUBCASE("flipped orientation") {
    CHECK_THROWS_AS(annotate(flipped(*tree), g, s), validation_error);
  }
  SUBCASE("tree missing an edge of the graph") {
    SPTree partial = parse_term("e(e1)");
    CHECK_THROWS_AS(annotate(partial, g, s), validation_error);
  }
  SUBCASE("asymmetric game") {
    Game fig3 = testing::load_game("fig3_game.json");
    State fig3_state = testing::load_state("fig3_state.json");
    auto any_tree = recognize(fig3.graph(), "A", "A1");
    REQUIRE(any_tree.has_value());
    CHECK_THROWS_AS(annotate(*any_tree, fig3, fig3_state), not_symmetric);
  }
}
