#pragma once

#include <optional>
#include <vector>

#include "mintb/game.hpp"

namespace mintb {

/// Resource caps for the exhaustive machinery.  Exceeding max_paths,
/// max_subset_size or max_fm_rows throws budget_error; the branch-and-bound
/// node cap is reported through OptimumResult::budget_exhausted instead so
/// that the best state found so far is not lost.
struct OracleBudgets {
  long max_bb_nodes = 5'000'000;
  int max_subset_size = 9;
  long max_paths = 200'000;
  // Inequality count an elimination step may produce; projection can grow
  // quadratically per variable, and this keeps pathological systems from
  // exhausting memory.
  long max_fm_rows = 200'000;
};

/// All simple source-sink paths of one player, in lexicographic edge-id
/// order.  With a cost cap, partial paths whose optimistic cost (every edge
/// at load 1) exceeds the cap are pruned.
std::vector<Path> enum_paths(const Game& game, PlayerId player,
                             const std::optional<Rational>& cost_cap = std::nullopt,
                             long max_paths = 200'000);

struct OptimumResult {
  State state;
  Rational cost;
  bool budget_exhausted = false;
  long nodes = 0;  // branch-and-bound nodes visited
};

/// Minimum-social-cost state by branch-and-bound over per-player path
/// choices.  An incumbent state seeds the upper bound.  Deterministic: the
/// lexicographically first optimum is returned (or the incumbent when
/// nothing beats it strictly).
OptimumResult social_optimum(const Game& game,
                             const std::optional<State>& incumbent = std::nullopt,
                             const OracleBudgets& budgets = {});

/// Decides whether tolls supported on `subset` can make the state a pure
/// Nash equilibrium, by exact rational elimination over the per-deviation
/// inequalities.  On success returns the solution minimizing the toll total
/// (ties broken by assigning each variable its lowest feasible value,
/// last subset edge first).
std::optional<TollVector> toll_feasible(const Game& game, const State& state,
                                        const std::vector<EdgeId>& subset,
                                        const OracleBudgets& budgets = {});

struct MintbResult {
  int count = 0;
  TollVector tolls;
  std::vector<EdgeId> support;
};

/// Exact minimum number of tolled edges implementing the state: subset sizes
/// ascending, subsets per size in lexicographic edge-id order, first feasible
/// wins.  Throws budget_error when no subset within max_subset_size works.
MintbResult min_tollbooths(const Game& game, const State& state,
                           const OracleBudgets& budgets = {});

/// Equilibrium check against the full deviation lists; semantically the same
/// predicate as is_pne, computed without shortest paths.
bool pne_exhaustive(const Game& game, const TollVector& tolls, const State& state,
                    const OracleBudgets& budgets = {});

}  // namespace mintb
