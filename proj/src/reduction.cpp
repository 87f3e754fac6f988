#include "mintb/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "mintb/errors.hpp"

namespace mintb {

// -- formulas ---------------------------------------------------------------

int Assignment::weight() const {
  return static_cast<int>(std::count(values.begin(), values.end(), true));
}

std::string Assignment::str() const {
  std::string s;
  for (bool v : values) s += v ? '1' : '0';
  return s;
}

Assignment parse_assignment(const std::string& text, int num_vars) {
  if (static_cast<int>(text.size()) != num_vars)
    throw parse_error("assignment \"" + text + "\" must have one digit per variable (" +
                      std::to_string(num_vars) + ")");
  Assignment a;
  for (char c : text) {
    if (c != '0' && c != '1') throw parse_error("assignment digits must be 0 or 1");
    a.values.push_back(c == '1');
  }
  return a;
}

bool CnfFormula::satisfied_by(const Assignment& a) const {
  if (static_cast<int>(a.values.size()) != num_vars)
    throw validation_error("assignment length does not match the variable count");
  for (const Clause& clause : clauses) {
    bool sat = false;
    for (const Literal& lit : clause) sat = sat || a.value(lit.var) == lit.positive;
    if (!sat) return false;
  }
  return true;
}

void CnfFormula::validate() const {
  if (num_vars < 0) throw validation_error("negative variable count");
  for (size_t j = 0; j < clauses.size(); ++j) {
    const Clause& clause = clauses[j];
    if (clause.empty())
      throw validation_error("clause " + std::to_string(j + 1) + " is empty");
    std::set<int> vars;
    for (const Literal& lit : clause) {
      if (lit.var < 1 || lit.var > num_vars)
        throw validation_error("clause " + std::to_string(j + 1) + " uses variable " +
                               std::to_string(lit.var) + " outside 1.." + std::to_string(num_vars));
      if (!vars.insert(lit.var).second)
        throw validation_error("clause " + std::to_string(j + 1) + " repeats variable " +
                               std::to_string(lit.var));
    }
  }
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  int declared_clauses = 0;
  CnfFormula formula;
  std::vector<int> numbers;

  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string where = " on line " + std::to_string(line_no);
    if (line[first] == 'c') continue;
    if (line[first] == 'p') {
      if (have_header) throw parse_error("second header" + where);
      std::istringstream ls(line);
      std::string p, kind;
      long long vars = -1, clauses = -1;
      std::string extra;
      if (!(ls >> p >> kind >> vars >> clauses) || p != "p" || kind != "cnf" || vars < 0 ||
          clauses < 0 || (ls >> extra))
        throw parse_error("malformed header" + where + " (expected \"p cnf <vars> <clauses>\")");
      formula.num_vars = static_cast<int>(vars);
      declared_clauses = static_cast<int>(clauses);
      have_header = true;
      continue;
    }
    if (!have_header) throw parse_error("clause data before the header" + where);
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(token, &used);
      } catch (const std::exception&) {
        throw parse_error("bad literal \"" + token + "\"" + where);
      }
      if (used != token.size()) throw parse_error("bad literal \"" + token + "\"" + where);
      numbers.push_back(value);
    }
  }
  if (!have_header) throw parse_error("missing \"p cnf\" header");

  Clause current;
  std::set<int> vars_in_clause;
  for (int value : numbers) {
    if (value == 0) {
      if (current.empty()) throw parse_error("empty clause");
      formula.clauses.push_back(std::move(current));
      current.clear();
      vars_in_clause.clear();
      continue;
    }
    int var = std::abs(value);
    if (var > formula.num_vars)
      throw parse_error("literal " + std::to_string(value) + " outside the declared " +
                        std::to_string(formula.num_vars) + " variables");
    if (!vars_in_clause.insert(var).second)
      throw parse_error("variable " + std::to_string(var) + " repeated in a clause");
    current.push_back(Literal{var, value > 0});
  }
  if (!current.empty()) throw parse_error("unterminated clause (missing trailing 0)");
  if (formula.num_clauses() != declared_clauses)
    throw parse_error("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                      std::to_string(formula.num_clauses()));
  return formula;
}

int OccurrenceStats::occurrence_index(int var, int polarity, int clause) const {
  const std::vector<int>& list = by_polarity[polarity].at(var - 1);
  for (size_t q = 0; q < list.size(); ++q)
    if (list[q] == clause) return static_cast<int>(q + 1);
  return 0;
}

OccurrenceStats occurrence_stats(const CnfFormula& formula) {
  formula.validate();
  OccurrenceStats stats;
  stats.by_polarity[0].assign(formula.num_vars, {});
  stats.by_polarity[1].assign(formula.num_vars, {});
  for (int j = 1; j <= formula.num_clauses(); ++j)
    for (const Literal& lit : formula.clauses[j - 1]) {
      stats.by_polarity[lit.positive ? 1 : 0][lit.var - 1].push_back(j);
      ++stats.total;
    }
  return stats;
}

std::optional<Assignment> min_weight_sat(const CnfFormula& formula, int max_vars) {
  formula.validate();
  if (formula.num_vars > max_vars)
    throw budget_error("exhaustive satisfiability limited to " + std::to_string(max_vars) +
                       " variables, got " + std::to_string(formula.num_vars));
  std::optional<Assignment> best;
  int best_weight = formula.num_vars + 1;
  for (unsigned long mask = 0; mask < (1ul << formula.num_vars); ++mask) {
    Assignment a;
    a.values.resize(formula.num_vars);
    for (int i = 0; i < formula.num_vars; ++i) a.values[i] = (mask >> i) & 1;
    int w = a.weight();
    if (w < best_weight && formula.satisfied_by(a)) {
      best = a;
      best_weight = w;
      if (w == 0) break;
    }
  }
  return best;
}

// -- gadget naming ----------------------------------------------------------

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::G1: return "G1";
    case Stage::G2: return "G2";
    case Stage::G3: return "G3";
  }
  throw internal_error("unknown stage");
}

std::optional<Stage> stage_from_name(const std::string& name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "g1") return Stage::G1;
  if (lower == "g2") return Stage::G2;
  if (lower == "g3") return Stage::G3;
  return std::nullopt;
}

NodeId source_node() { return "s"; }
NodeId variable_hub(int i) { return "v" + std::to_string(i); }
NodeId variable_entry(int i, int b) {
  return "v" + std::to_string(i) + "." + std::to_string(b);
}
NodeId grid_left(int b, int i, int row, int col) {
  return "l" + std::to_string(b) + "." + std::to_string(i) + "." + std::to_string(row) + "." +
         std::to_string(col);
}
NodeId grid_right(int b, int i, int row, int col) {
  return "r" + std::to_string(b) + "." + std::to_string(i) + "." + std::to_string(row) + "." +
         std::to_string(col);
}
NodeId chain_end(int b, int i, int occ) {
  return "z" + std::to_string(b) + "." + std::to_string(i) + "." + std::to_string(occ);
}
NodeId occurrence_node(int b, int i, int occ) {
  return "o" + std::to_string(b) + "." + std::to_string(i) + "." + std::to_string(occ);
}
NodeId clause_node(int j) { return "c" + std::to_string(j); }
EdgeId gadget_edge(const NodeId& u, const NodeId& v) { return u + "~" + v; }
EdgeId variable_edge(int i) { return gadget_edge(variable_entry(i, 0), variable_entry(i, 1)); }

// -- gadget construction ----------------------------------------------------

namespace {

// Cost shapes, instantiated into tables once the big-M value is known.
enum class CostTag { kFreeway, kTwo, kSeven, kCheapOrBlocked, kSixOrBlocked, kLinearTwo };

struct GridShape {
  int rows = 0;       // one row per occurrence of (variable, polarity)
  int cols = 0;       // row length: max(1, opposite-polarity occurrences)
  bool padded = false;  // corridor-only substitute row when rows == 0
  int total_rows() const { return padded ? 1 : rows; }
};

GridShape grid_shape(const OccurrenceStats& stats, int i, int b, Stage stage) {
  GridShape shape;
  shape.rows = stats.count(i, b);
  int opposite = stats.count(i, 1 - b);
  shape.cols = std::max(1, opposite);
  shape.padded = stage != Stage::G1 && shape.rows == 0 && opposite > 0;
  return shape;
}

const char* side_name(int b) { return b == 1 ? "positive" : "negative"; }

struct Draft {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  std::vector<CostTag> tags;
  std::map<NodeId, std::string> roles;

  void node(NodeId id, std::string role) {
    roles.emplace(id, std::move(role));
    nodes.push_back(std::move(id));
  }
  void edge(const NodeId& u, const NodeId& v, CostTag tag) {
    edges.push_back(Edge{gadget_edge(u, v), u, v});
    tags.push_back(tag);
  }
};

}  // namespace

GadgetGame build_game(const CnfFormula& formula, Stage stage) {
  formula.validate();
  OccurrenceStats stats = occurrence_stats(formula);
  const int n = formula.num_vars;
  const int m = formula.num_clauses();

  Draft draft;
  draft.node(source_node(), "source");
  for (int i = 1; i <= n; ++i) {
    const std::string var = "variable " + std::to_string(i);
    draft.node(variable_hub(i), "hub of " + var);
    draft.node(variable_entry(i, 0), "negative entry of " + var);
    draft.node(variable_entry(i, 1), "positive entry of " + var);
    for (int b = 0; b <= 1; ++b) {
      GridShape shape = grid_shape(stats, i, b, stage);
      for (int j = 1; j <= shape.total_rows(); ++j) {
        std::string row_role = std::string("grid node: ") + var + ", " + side_name(b) +
                               " side, row " + std::to_string(j);
        if (shape.padded) row_role += " (padding)";
        for (int k = 1; k <= shape.cols; ++k) {
          draft.node(grid_left(b, i, j, k), row_role + ", column " + std::to_string(k));
          draft.node(grid_right(b, i, j, k), row_role + ", column " + std::to_string(k));
        }
        if (!shape.padded)
          draft.node(chain_end(b, i, j), std::string("chain end: ") + var + ", " + side_name(b) +
                                             " occurrence " + std::to_string(j));
      }
    }
    if (stage != Stage::G1)
      for (int b = 0; b <= 1; ++b)
        for (int j = 1; j <= stats.count(i, b); ++j)
          draft.node(occurrence_node(b, i, j), std::string("occurrence node: ") + var + ", " +
                                                   side_name(b) + " occurrence " +
                                                   std::to_string(j));
  }
  for (int j = 1; j <= m; ++j) draft.node(clause_node(j), "node of clause " + std::to_string(j));

  for (int i = 1; i <= n; ++i) {
    draft.edge(source_node(), variable_hub(i), CostTag::kFreeway);
    draft.edge(variable_hub(i), variable_entry(i, 1), CostTag::kSeven);
    draft.edge(variable_hub(i), variable_entry(i, 0), CostTag::kTwo);
    for (int b = 0; b <= 1; ++b) {
      GridShape shape = grid_shape(stats, i, b, stage);
      for (int j = 1; j <= shape.total_rows(); ++j) {
        if (!shape.padded)
          draft.edge(variable_entry(i, b), grid_left(b, i, j, 1), CostTag::kCheapOrBlocked);
        for (int k = 1; k <= shape.cols; ++k) {
          draft.edge(grid_left(b, i, j, k), grid_right(b, i, j, k), CostTag::kCheapOrBlocked);
          if (k < shape.cols)
            draft.edge(grid_right(b, i, j, k), grid_left(b, i, j, k + 1),
                       CostTag::kCheapOrBlocked);
        }
        if (!shape.padded) {
          draft.edge(grid_right(b, i, j, shape.cols), chain_end(b, i, j),
                     CostTag::kCheapOrBlocked);
          draft.edge(chain_end(b, i, j), clause_node(stats.clause_of(i, b, j)),
                     CostTag::kCheapOrBlocked);
        }
      }
    }
    if (stage != Stage::G1) {
      for (int b = 0; b <= 1; ++b)
        for (int j = 1; j <= stats.count(i, b); ++j) {
          draft.edge(occurrence_node(b, i, j), chain_end(b, i, j), CostTag::kSixOrBlocked);
          draft.edge(occurrence_node(b, i, j), grid_left(1 - b, i, 1, j),
                     CostTag::kCheapOrBlocked);
        }
      for (int b = 0; b <= 1; ++b) {
        GridShape shape = grid_shape(stats, i, b, stage);
        for (int j = 1; j < shape.total_rows(); ++j)
          for (int k = 1; k <= shape.cols; ++k)
            draft.edge(grid_right(b, i, j, k), grid_left(b, i, j + 1, k),
                       CostTag::kCheapOrBlocked);
        for (int k = 1; k <= stats.count(i, 1 - b); ++k)
          draft.edge(grid_right(b, i, shape.total_rows(), k),
                     clause_node(stats.clause_of(i, 1 - b, k)), CostTag::kSixOrBlocked);
      }
    }
  }
  if (stage == Stage::G3)
    for (int i = 1; i <= n; ++i)
      draft.edge(variable_entry(i, 0), variable_entry(i, 1), CostTag::kLinearTwo);

  std::vector<Player> players;
  std::map<PlayerId, std::string> player_roles;
  PlayerId pid = 0;
  for (int j = 1; j <= m; ++j) {
    players.push_back(Player{++pid, source_node(), clause_node(j)});
    player_roles[pid] = "clause player for clause " + std::to_string(j);
  }
  if (stage != Stage::G1)
    for (int i = 1; i <= n; ++i)
      for (int b = 0; b <= 1; ++b)
        for (int j = 1; j <= stats.count(i, b); ++j) {
          players.push_back(
              Player{++pid, occurrence_node(b, i, j), clause_node(stats.clause_of(i, b, j))});
          player_roles[pid] = std::string("occurrence player: variable ") + std::to_string(i) +
                              ", " + side_name(b) + " occurrence " + std::to_string(j);
        }
  if (stage == Stage::G3)
    for (int i = 1; i <= n; ++i) {
      players.push_back(Player{++pid, variable_entry(i, 0), variable_entry(i, 1)});
      player_roles[pid] = "variable player for variable " + std::to_string(i);
    }

  // Strictly above the cost of any path that avoids overloading: each finite
  // edge costs at most max(7, 2 * (players + 1)) <= 7 + 2 * (m + total + n).
  const int player_total = pid;
  Rational big_m = Rational(1) + Rational(static_cast<long long>(draft.edges.size())) *
                                     Rational(7 + 2 * (m + stats.total + n));

  std::vector<std::vector<Rational>> tables;
  tables.reserve(draft.edges.size());
  for (CostTag tag : draft.tags) {
    std::vector<Rational> table(player_total + 1);
    switch (tag) {
      case CostTag::kFreeway:
        break;
      case CostTag::kTwo:
        std::fill(table.begin(), table.end(), Rational(2));
        break;
      case CostTag::kSeven:
        std::fill(table.begin(), table.end(), Rational(7));
        break;
      case CostTag::kCheapOrBlocked:
        std::fill(table.begin() + 1, table.end(), big_m);
        break;
      case CostTag::kSixOrBlocked:
        table[0] = Rational(6);
        std::fill(table.begin() + 1, table.end(), big_m);
        break;
      case CostTag::kLinearTwo:
        for (int k = 0; k <= player_total; ++k) table[k] = Rational(2 * (k + 1));
        break;
    }
    tables.push_back(std::move(table));
  }

  Game game(Multigraph(std::move(draft.nodes), std::move(draft.edges)), std::move(players),
            std::move(tables));
  return GadgetGame{std::move(game),      formula, std::move(stats),
                    stage,                std::move(draft.roles),
                    std::move(player_roles)};
}

// -- intended profile -------------------------------------------------------

ClauseChoice default_clause_choice(const CnfFormula& formula, const Assignment& a) {
  if (static_cast<int>(a.values.size()) != formula.num_vars)
    throw validation_error("assignment length does not match the variable count");
  ClauseChoice choice;
  for (int j = 1; j <= formula.num_clauses(); ++j) {
    const Clause& clause = formula.clauses[j - 1];
    auto hit = std::find_if(clause.begin(), clause.end(), [&](const Literal& lit) {
      return a.value(lit.var) == lit.positive;
    });
    if (hit == clause.end())
      throw validation_error("assignment leaves clause " + std::to_string(j) + " unsatisfied");
    choice.emplace(j, *hit);
  }
  return choice;
}

State build_intended_state(const GadgetGame& gadget, const Assignment& a,
                           const ClauseChoice& choice) {
  const CnfFormula& formula = gadget.formula;
  const OccurrenceStats& stats = gadget.stats;
  if (static_cast<int>(a.values.size()) != formula.num_vars)
    throw validation_error("assignment length does not match the variable count");
  if (!formula.satisfied_by(a))
    throw validation_error("intended profile requires a satisfying assignment");

  State state;
  PlayerId pid = 0;
  for (int j = 1; j <= formula.num_clauses(); ++j) {
    auto it = choice.find(j);
    if (it == choice.end())
      throw validation_error("no chosen literal for clause " + std::to_string(j));
    const Literal lit = it->second;
    const Clause& clause = formula.clauses[j - 1];
    if (std::find(clause.begin(), clause.end(), lit) == clause.end())
      throw validation_error("chosen literal for clause " + std::to_string(j) +
                             " is not in the clause");
    if (a.value(lit.var) != lit.positive)
      throw validation_error("chosen literal for clause " + std::to_string(j) +
                             " is false under the assignment");
    const int b = lit.positive ? 1 : 0;
    const int q = stats.occurrence_index(lit.var, b, j);
    const int cols = std::max(1, stats.count(lit.var, 1 - b));
    Path path;
    path.push_back(gadget_edge(source_node(), variable_hub(lit.var)));
    path.push_back(gadget_edge(variable_hub(lit.var), variable_entry(lit.var, b)));
    path.push_back(gadget_edge(variable_entry(lit.var, b), grid_left(b, lit.var, q, 1)));
    for (int k = 1; k <= cols; ++k) {
      path.push_back(gadget_edge(grid_left(b, lit.var, q, k), grid_right(b, lit.var, q, k)));
      if (k < cols)
        path.push_back(gadget_edge(grid_right(b, lit.var, q, k), grid_left(b, lit.var, q, k + 1)));
    }
    path.push_back(gadget_edge(grid_right(b, lit.var, q, cols), chain_end(b, lit.var, q)));
    path.push_back(gadget_edge(chain_end(b, lit.var, q), clause_node(j)));
    state.set_path(++pid, std::move(path));
  }

  if (gadget.stage != Stage::G1)
    for (int i = 1; i <= formula.num_vars; ++i)
      for (int b = 0; b <= 1; ++b)
        for (int q = 1; q <= stats.count(i, b); ++q) {
          const int j = stats.clause_of(i, b, q);
          const bool blocked = choice.at(j) == Literal{i, b == 1};
          Path path;
          if (!blocked) {
            path.push_back(gadget_edge(occurrence_node(b, i, q), chain_end(b, i, q)));
            path.push_back(gadget_edge(chain_end(b, i, q), clause_node(j)));
          } else {
            // The chain end is occupied by clause player j, so detour through
            // column q of the opposite grid and exit straight to the clause.
            const int rows = std::max(1, stats.count(i, 1 - b));
            path.push_back(gadget_edge(occurrence_node(b, i, q), grid_left(1 - b, i, 1, q)));
            for (int r = 1; r <= rows; ++r) {
              path.push_back(gadget_edge(grid_left(1 - b, i, r, q), grid_right(1 - b, i, r, q)));
              if (r < rows)
                path.push_back(
                    gadget_edge(grid_right(1 - b, i, r, q), grid_left(1 - b, i, r + 1, q)));
            }
            path.push_back(gadget_edge(grid_right(1 - b, i, rows, q), clause_node(j)));
          }
          state.set_path(++pid, std::move(path));
        }

  if (gadget.stage == Stage::G3)
    for (int i = 1; i <= formula.num_vars; ++i) state.set_path(++pid, {variable_edge(i)});

  validate_state(gadget.game, state);
  return state;
}

State build_intended_state(const GadgetGame& gadget, const Assignment& a) {
  return build_intended_state(gadget, a, default_clause_choice(gadget.formula, a));
}

Assignment extract_assignment(const GadgetGame& gadget, const TollVector& tolls) {
  Assignment a;
  a.values.assign(gadget.formula.num_vars, false);
  for (int i = 1; i <= gadget.formula.num_vars; ++i)
    if (!tolls.get(variable_edge(i)).is_zero()) a.values[i - 1] = true;
  return a;
}

// -- construction checks ----------------------------------------------------

PropertyReport verify_properties(const GadgetGame& gadget, const State& state,
                                 const OracleBudgets& budgets) {
  validate_state(gadget.game, state);
  PropertyReport report;
  const int n = gadget.formula.num_vars;
  const int m = gadget.formula.num_clauses();

  report.clause_coverage = true;
  std::set<NodeId> clause_sinks;
  for (int j = 1; j <= m; ++j) {
    const Player& p = gadget.game.player(j);
    if (p.source != source_node() || !clause_sinks.insert(p.sink).second)
      report.clause_coverage = false;
  }
  for (int j = 1; j <= m; ++j)
    if (!clause_sinks.count(clause_node(j))) report.clause_coverage = false;
  if (!report.clause_coverage)
    report.notes.push_back("clause nodes are not in bijection with clause-player sinks");

  report.polarity_consistency = true;
  for (int i = 1; i <= n; ++i) {
    bool used[2] = {false, false};
    for (int j = 1; j <= m; ++j) {
      const Path& path = state.path(j);
      for (int b = 0; b <= 1; ++b) {
        const EdgeId entry = gadget_edge(variable_hub(i), variable_entry(i, b));
        if (std::find(path.begin(), path.end(), entry) != path.end()) used[b] = true;
      }
    }
    if (used[0] && used[1]) {
      report.polarity_consistency = false;
      report.notes.push_back("variable " + std::to_string(i) +
                             " serves clause players in both polarities");
    }
  }

  MintbResult mintb = min_tollbooths(gadget.game, state, budgets);
  report.mintb_count = mintb.count;
  report.extracted = extract_assignment(gadget, mintb.tolls);

  std::optional<Assignment> best = min_weight_sat(gadget.formula);
  if (best) {
    report.min_sat_weight = best->weight();
    report.toll_lower_bound = report.mintb_count >= report.min_sat_weight;
    if (!report.toll_lower_bound)
      report.notes.push_back("tollbooth minimum " + std::to_string(report.mintb_count) +
                             " is below the minimum satisfying weight " +
                             std::to_string(report.min_sat_weight));
    else if (report.mintb_count != report.min_sat_weight)
      report.notes.push_back("tollbooth minimum " + std::to_string(report.mintb_count) +
                             " exceeds the minimum satisfying weight " +
                             std::to_string(report.min_sat_weight) +
                             " (state encodes a non-minimal assignment)");
  } else {
    report.min_sat_weight = -1;
    report.toll_lower_bound = true;
    report.notes.push_back("formula is unsatisfiable; the weight bound is vacuous");
  }

  report.extraction_satisfies = gadget.formula.satisfied_by(report.extracted);
  if (!report.extraction_satisfies)
    report.notes.push_back("assignment " + report.extracted.str() +
                           " extracted from minimal tolls does not satisfy the formula");
  if (report.extracted.weight() != report.mintb_count)
    report.notes.push_back("minimal tolls use " + std::to_string(report.mintb_count) +
                           " edges but only " + std::to_string(report.extracted.weight()) +
                           " variable edges");
  return report;
}

}  // namespace mintb
