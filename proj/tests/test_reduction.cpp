#include <algorithm>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "mintb/oracle.hpp"
#include "mintb/reduction.hpp"

using namespace mintb;
using mintb::testing::read_text;

namespace {

bool has_note(const PropertyReport& report, const std::string& needle) {
  return std::any_of(report.notes.begin(), report.notes.end(), [&](const std::string& note) {
    return note.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("dimacs parsing") {
  CnfFormula fig1 = parse_dimacs(read_text("fig1.cnf"));
  CHECK(fig1.num_vars == 2);
  REQUIRE(fig1.num_clauses() == 2);
  CHECK(fig1.clauses[0] == Clause{{1, true}});
  CHECK(fig1.clauses[1] == Clause{{1, false}, {2, true}});

  CnfFormula ab = parse_dimacs(read_text("fig_ab.cnf"));
  CHECK(ab.clauses[0] == Clause{{1, true}, {2, true}});
  CHECK(ab.clauses[1] == Clause{{1, false}, {2, false}});

  SUBCASE("comments, blank lines and clauses spanning lines are fine") {
    CnfFormula f = parse_dimacs("c a comment\n\np cnf 3 1\nc mid\n1 -2\n3 0\n");
    REQUIRE(f.num_clauses() == 1);
    CHECK(f.clauses[0].size() == 3);
  }
  SUBCASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_dimacs(""), parse_error);                          // no header
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), parse_error);                     // data first
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\np cnf 1 1\n1 0\n"), parse_error);
    CHECK_THROWS_AS(parse_dimacs("p cnf x 1\n1 0\n"), parse_error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 y 0\n"), parse_error);        // bad literal
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), parse_error);          // out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 1 0\n"), parse_error);        // repeated var
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -1 0\n"), parse_error);       // both signs
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), parse_error);            // empty clause
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), parse_error);          // missing 0
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), parse_error);          // count off
  }
}

TEST_CASE("occurrence bookkeeping") {
  OccurrenceStats stats = occurrence_stats(parse_dimacs(read_text("fig1.cnf")));
  CHECK(stats.total == 3);
  CHECK(stats.count(1, 1) == 1);
  CHECK(stats.count(1, 0) == 1);
  CHECK(stats.count(2, 1) == 1);
  CHECK(stats.count(2, 0) == 0);
  CHECK(stats.count(1) == 2);
  CHECK(stats.clause_of(1, 0, 1) == 2);  // the negated A sits in clause 2
  CHECK(stats.clause_of(2, 1, 1) == 2);
  CHECK(stats.occurrence_index(1, 0, 2) == 1);
  CHECK(stats.occurrence_index(1, 0, 1) == 0);  // not there
}

TEST_CASE("assignments and minimum-weight satisfiability") {
  Assignment a = parse_assignment("10", 2);
  CHECK(a.value(1));
  CHECK_FALSE(a.value(2));
  CHECK(a.weight() == 1);
  CHECK(a.str() == "10");
  CHECK_THROWS_AS(parse_assignment("1", 2), parse_error);
  CHECK_THROWS_AS(parse_assignment("12", 2), parse_error);

  CnfFormula fig1 = parse_dimacs(read_text("fig1.cnf"));
  auto best = min_weight_sat(fig1);
  REQUIRE(best.has_value());
  CHECK(best->str() == "11");  // A forces itself, then the second clause needs B
  CHECK(best->weight() == 2);

  auto ab = min_weight_sat(parse_dimacs(read_text("fig_ab.cnf")));
  REQUIRE(ab.has_value());
  CHECK(ab->str() == "10");  // weight 1; lowest mask breaks the tie with 01
  CHECK(fig1.satisfied_by(*best));

  CHECK(min_weight_sat(parse_dimacs("p cnf 1 1\n-1 0\n"))->weight() == 0);
  CHECK_FALSE(min_weight_sat(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")).has_value());
  CHECK_THROWS_AS(min_weight_sat(parse_dimacs(read_text("fig1.cnf")), 1), budget_error);
}

TEST_CASE("stage names round-trip") {
  CHECK(stage_name(Stage::G2) == "G2");
  CHECK(stage_from_name("g2") == Stage::G2);
  CHECK(stage_from_name("G3") == Stage::G3);
  CHECK_FALSE(stage_from_name("g4").has_value());
}

TEST_CASE("gadget sizes follow the occurrence counts") {
  CnfFormula fig1 = parse_dimacs(read_text("fig1.cnf"));
  GadgetGame g1 = build_game(fig1, Stage::G1);
  CHECK(g1.game.graph().node_count() == 18);
  CHECK(g1.game.player_count() == 2);  // clause players only
  GadgetGame g2 = build_game(fig1, Stage::G2);
  CHECK(g2.game.graph().node_count() == 23);  // occurrence nodes plus one padding row
  CHECK(g2.game.player_count() == 5);
  GadgetGame g3 = build_game(fig1, Stage::G3);
  CHECK(g3.game.player_count() == 7);  // m + occurrences + n = 2 + 3 + 2
  CHECK(g3.game.graph().node_count() == g2.game.graph().node_count());
  CHECK(g3.game.graph().edge_count() == g2.game.graph().edge_count() + 2);

  CnfFormula ab = parse_dimacs(read_text("fig_ab.cnf"));
  GadgetGame ab1 = build_game(ab, Stage::G1);
  CHECK(ab1.game.graph().node_count() == 21);
  CHECK(ab1.game.graph().edge_count() == 22);
  CHECK(build_game(ab, Stage::G2).game.graph().edge_count() == 34);
  GadgetGame ab3 = build_game(ab, Stage::G3);
  CHECK(ab3.game.graph().edge_count() == 36);
  CHECK(ab3.game.player_count() == 8);

  // Every node and player carries a readable role.
  CHECK(ab3.node_roles.size() == static_cast<size_t>(ab3.game.graph().node_count()));
  CHECK(ab3.player_roles.size() == static_cast<size_t>(ab3.game.player_count()));
  CHECK(ab3.node_roles.at("s") == "source");
  CHECK(ab3.player_roles.at(1).find("clause") != std::string::npos);
  CHECK(ab3.game.graph().has_edge(variable_edge(1)));
  CHECK_FALSE(build_game(ab, Stage::G2).game.graph().has_edge(variable_edge(1)));
}

TEST_CASE("intended profiles route as designed") {
  GadgetGame g3 = build_game(parse_dimacs(read_text("fig_ab.cnf")), Stage::G3);
  Assignment a = parse_assignment("10", 2);
  ClauseChoice choice = default_clause_choice(g3.formula, a);
  CHECK(choice.at(1) == Literal{1, true});   // clause 1 satisfied by A
  CHECK(choice.at(2) == Literal{2, false});  // clause 2 by the negated B
  State s = build_intended_state(g3, a, choice);

  // Clause players pay 7 through a positive entry, 2 through a negative one.
  CHECK(player_cost(g3.game, {}, s, 1) == Rational(7));
  CHECK(player_cost(g3.game, {}, s, 2) == Rational(2));
  // Occurrence players pay 6, via the chain end or via a detour corridor.
  for (PlayerId id = 3; id <= 6; ++id) CHECK(player_cost(g3.game, {}, s, id) == Rational(6));
  // Variable players pay their linear edge at load 1.
  CHECK(player_cost(g3.game, {}, s, 7) == Rational(2));
  CHECK(player_cost(g3.game, {}, s, 8) == Rational(2));
  CHECK(s.path(7) == Path{variable_edge(1)});

  SUBCASE("the profile avoids every blocked cost") {
    // No player pays anything close to the blocking constant.
    for (const Player& p : g3.game.players())
      CHECK(player_cost(g3.game, {}, s, p.id) <= Rational(7));
  }
  SUBCASE("preconditions are enforced") {
    CHECK_THROWS_AS(build_intended_state(g3, parse_assignment("00", 2)), validation_error);
    ClauseChoice wrong = choice;
    wrong[1] = Literal{2, true};  // not in clause 1... actually in it, but false
    CHECK_THROWS_AS(build_intended_state(g3, a, wrong), validation_error);
    ClauseChoice missing;
    CHECK_THROWS_AS(build_intended_state(g3, a, missing), validation_error);
  }
}

TEST_CASE("the occurrence stage is an equilibrium, the toll stage is not") {
  CnfFormula ab = parse_dimacs(read_text("fig_ab.cnf"));
  Assignment a = parse_assignment("10", 2);

  GadgetGame g2 = build_game(ab, Stage::G2);
  CHECK(is_pne(g2.game, {}, build_intended_state(g2, a)).pne);

  GadgetGame g3 = build_game(ab, Stage::G3);
  State s = build_intended_state(g3, a);
  PneVerdict v = is_pne(g3.game, {}, s);
  CHECK_FALSE(v.pne);
  CHECK(v.player == 1);  // the 7-chain player shortcuts through the variable edge
  CHECK(v.improved_cost == Rational(6));
  CHECK(std::find(v.improving_path.begin(), v.improving_path.end(), variable_edge(1)) !=
        v.improving_path.end());
}

TEST_CASE("assignment extraction reads the variable edges") {
  GadgetGame g3 = build_game(parse_dimacs(read_text("fig_ab.cnf")), Stage::G3);
  TollVector tolls;
  tolls.set(variable_edge(1), Rational(1));
  CHECK(extract_assignment(g3, tolls).str() == "10");
  tolls.set(gadget_edge(variable_hub(2), variable_entry(2, 0)), Rational(3));
  CHECK(extract_assignment(g3, tolls).str() == "10");  // non-variable edges ignored
  CHECK(extract_assignment(g3, {}).str() == "00");
}

TEST_CASE("construction checks pass on the intended toll-stage profile") {
  GadgetGame g3 = build_game(parse_dimacs(read_text("fig_ab.cnf")), Stage::G3);
  State s = build_intended_state(g3, parse_assignment("10", 2));
  PropertyReport report = verify_properties(g3, s);
  CHECK(report.all_hold());
  CHECK(report.mintb_count == 1);
  CHECK(report.min_sat_weight == 1);
  CHECK(report.extracted.str() == "10");
  CHECK(report.notes.empty());
}

TEST_CASE("a non-minimal clause choice shows up as extra tollbooths") {
  // A AND (A OR B): choosing B for the second clause forces tolls on both
  // variables even though weight 1 suffices.
  CnfFormula f = parse_dimacs("p cnf 2 2\n1 0\n1 2 0\n");
  GadgetGame g3 = build_game(f, Stage::G3);
  ClauseChoice choice{{1, Literal{1, true}}, {2, Literal{2, true}}};
  State s = build_intended_state(g3, parse_assignment("11", 2), choice);
  PropertyReport report = verify_properties(g3, s);
  CHECK(report.mintb_count == 2);
  CHECK(report.min_sat_weight == 1);
  CHECK(report.toll_lower_bound);
  CHECK(report.extraction_satisfies);
  CHECK(report.extracted.str() == "11");
  CHECK(has_note(report, "exceeds the minimum satisfying weight"));
}

TEST_CASE("single-polarity variables get a padding corridor row") {
  CnfFormula f = parse_dimacs("p cnf 2 1\n1 2 0\n");  // A OR B, no negations anywhere
  GadgetGame g2 = build_game(f, Stage::G2);
  // Padding rows exist on the negative side so occurrence detours stay possible.
  CHECK(g2.game.graph().has_node(grid_left(0, 1, 1, 1)));
  CHECK(g2.game.graph().has_node(grid_left(0, 2, 1, 1)));
  CHECK_FALSE(g2.game.graph().has_node(chain_end(0, 1, 1)));  // padding has no chain end
  GadgetGame g1 = build_game(f, Stage::G1);
  CHECK_FALSE(g1.game.graph().has_node(grid_left(0, 1, 1, 1)));  // only with detours

  GadgetGame g3 = build_game(f, Stage::G3);
  State s = build_intended_state(g3, parse_assignment("10", 2));
  // The blocked occurrence player of A detours over the padding row.
  CHECK(player_cost(g3.game, {}, s, 2) == Rational(6));
  PropertyReport report = verify_properties(g3, s);
  CHECK(report.all_hold());
  CHECK(report.mintb_count == 1);
}

TEST_CASE("stage one of the forcing formula breaks polarity consistency") {
  // A AND (NOT A OR B): without occurrence players the cheap state assigns A
  // both values at once.
  GadgetGame g1 = build_game(parse_dimacs(read_text("fig1.cnf")), Stage::G1);
  OptimumResult opt = social_optimum(g1.game);
  CHECK(opt.cost == Rational(9));  // 7 for the forced positive chain, 2 for the negative
  PropertyReport report = verify_properties(g1, opt.state);
  CHECK(report.clause_coverage);
  CHECK_FALSE(report.polarity_consistency);
  CHECK(has_note(report, "both polarities"));
  CHECK(report.mintb_count == 0);  // the cheap state is already an equilibrium
  CHECK(report.min_sat_weight == 2);
  CHECK_FALSE(report.toll_lower_bound);
  CHECK_FALSE(report.extraction_satisfies);
  CHECK_FALSE(report.all_hold());
}
