#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mintb/game.hpp"
#include "mintb/oracle.hpp"

namespace mintb {

// -- formulas ---------------------------------------------------------------

struct Literal {
  int var = 0;  // 1-based variable index
  bool positive = true;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.positive == b.positive;
  }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
};

using Clause = std::vector<Literal>;

/// 0/1 value per variable; values[i-1] is variable i.
struct Assignment {
  std::vector<bool> values;

  bool value(int var) const { return values.at(var - 1); }
  int weight() const;
  std::string str() const;  // e.g. "10" for x1=1, x2=0
};

/// Parses a string of '0'/'1' characters, one per variable.
Assignment parse_assignment(const std::string& text, int num_vars);

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  int num_clauses() const { return static_cast<int>(clauses.size()); }
  bool satisfied_by(const Assignment& a) const;
  /// Clause nonempty, variables in range, no variable twice in a clause.
  void validate() const;
};

/// Strict DIMACS CNF: comment lines, a "p cnf <vars> <clauses>" header, then
/// zero-terminated clauses.  Clause-count mismatch, out-of-range variables,
/// repeated variables inside a clause, and empty clauses are all rejected.
CnfFormula parse_dimacs(const std::string& text);

/// Per-variable occurrence bookkeeping: which clauses contain each literal.
struct OccurrenceStats {
  // by_polarity[b][i-1]: ascending 1-based clause indices where variable i
  // occurs with polarity b (0 = negated, 1 = positive).
  std::vector<std::vector<int>> by_polarity[2];
  int total = 0;  // occurrences over the whole formula

  int count(int var, int polarity) const {
    return static_cast<int>(by_polarity[polarity].at(var - 1).size());
  }
  int count(int var) const { return count(var, 0) + count(var, 1); }
  /// Clause index of the occ-th (1-based) occurrence of (var, polarity).
  int clause_of(int var, int polarity, int occ) const {
    return by_polarity[polarity].at(var - 1).at(occ - 1);
  }
  /// 1-based position of `clause` in the occurrence list, or 0 if absent.
  int occurrence_index(int var, int polarity, int clause) const;
};

OccurrenceStats occurrence_stats(const CnfFormula& formula);

/// Smallest-weight satisfying assignment (ties: lexicographically smallest
/// with x1 as the low bit), or nullopt when unsatisfiable.  Exhaustive over
/// 2^n assignments; throws budget_error when num_vars > max_vars.
std::optional<Assignment> min_weight_sat(const CnfFormula& formula, int max_vars = 20);

// -- gadget games -----------------------------------------------------------

/// Construction stages: G1 carries only clause players, G2 adds occurrence
/// players and their detour corridors, G3 adds variable players and the
/// tollable variable edges.
enum class Stage { G1, G2, G3 };

std::string stage_name(Stage stage);
std::optional<Stage> stage_from_name(const std::string& name);

// Node naming scheme of the gadget graphs.  Variables i, clauses j, and
// occurrence indices are 1-based; polarity b is 0 or 1.
NodeId source_node();                                      // "s"
NodeId variable_hub(int i);                                // "v{i}"
NodeId variable_entry(int i, int b);                       // "v{i}.{b}"
NodeId grid_left(int b, int i, int row, int col);          // "l{b}.{i}.{row}.{col}"
NodeId grid_right(int b, int i, int row, int col);         // "r{b}.{i}.{row}.{col}"
NodeId chain_end(int b, int i, int occ);                   // "z{b}.{i}.{occ}"
NodeId occurrence_node(int b, int i, int occ);             // "o{b}.{i}.{occ}"
NodeId clause_node(int j);                                 // "c{j}"
EdgeId gadget_edge(const NodeId& u, const NodeId& v);      // "{u}~{v}"
EdgeId variable_edge(int i);                               // "v{i}.0~v{i}.1"

struct GadgetGame {
  Game game;
  CnfFormula formula;
  OccurrenceStats stats;
  Stage stage = Stage::G1;
  std::map<NodeId, std::string> node_roles;
  std::map<PlayerId, std::string> player_roles;

  int clause_players() const { return formula.num_clauses(); }
  int occurrence_players() const { return stage == Stage::G1 ? 0 : stats.total; }
  int variable_players() const { return stage == Stage::G3 ? formula.num_vars : 0; }
};

/// Builds the gadget game of the chosen stage.  Effectively-infinite costs
/// are a big-M constant strictly above every all-finite path cost.  Variables
/// occurring in only one polarity get one padding corridor row of the missing
/// polarity (G2/G3) so their occurrence players keep a detour route.
GadgetGame build_game(const CnfFormula& formula, Stage stage);

/// Per clause, the satisfying literal its clause player routes through.
using ClauseChoice = std::map<int, Literal>;

/// First literal of each clause that is true under the assignment; throws
/// validation_error when some clause is unsatisfied.
ClauseChoice default_clause_choice(const CnfFormula& formula, const Assignment& a);

/// The intended profile for a satisfying assignment: clause players route
/// through their chosen literal's chain, blocked occurrence players detour
/// through the opposite grid's corridor, the rest go straight to their chain
/// end, and variable players take their single edge.
State build_intended_state(const GadgetGame& gadget, const Assignment& a,
                           const ClauseChoice& choice);
State build_intended_state(const GadgetGame& gadget, const Assignment& a);

/// x_i = 1 exactly when the variable edge {v_i.0, v_i.1} carries a toll.
Assignment extract_assignment(const GadgetGame& gadget, const TollVector& tolls);

// -- construction checks ----------------------------------------------------

struct PropertyReport {
  bool clause_coverage = false;       // every clause node sinks exactly one clause player
  bool polarity_consistency = false;  // no variable serves clause players in both polarities
  bool toll_lower_bound = false;      // tollbooth minimum >= minimum satisfying weight
  bool extraction_satisfies = false;  // assignment read off the minimal tolls satisfies F
  int mintb_count = -1;
  int min_sat_weight = -1;  // -1 when unsatisfiable
  Assignment extracted;
  std::vector<std::string> notes;

  bool all_hold() const {
    return clause_coverage && polarity_consistency && toll_lower_bound && extraction_satisfies;
  }
};

/// Checks the four construction properties against a concrete state (the
/// intended profile or a computed social optimum).  Never throws on a
/// violation; the report carries the verdicts and explanatory notes.
PropertyReport verify_properties(const GadgetGame& gadget, const State& state,
                                 const OracleBudgets& budgets = {});

}  // namespace mintb
