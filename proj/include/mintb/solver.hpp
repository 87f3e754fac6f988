#pragma once

#include <vector>

#include "mintb/game.hpp"
#include "mintb/sp_tree.hpp"
#include "mintb/tollability.hpp"

namespace mintb {

/// Optional window into a solve: the tree it ran on, the per-node lists and
/// the state annotation.  Used by tests and the CLI's list report.
struct SolveDebug {
  SPTree tree;
  Annotation annotation;
  std::vector<TollabilityList> lists;  // by arena index; empty when unused
};

struct SolveResult {
  TollVector tolls;
  int tolled_edges = 0;
  /// Cheapest possible cost of a hypothetical extra player under the
  /// produced tolls (the root's lambda0).
  Rational entry_floor;
};

/// Bottom-up tollability lists for every node of the tree, driven by the
/// state's loads and per-node player costs.
std::vector<TollabilityList> build_lists(const SPTree& tree, const Game& game,
                                         const Annotation& ann);

/// Top-down placement: distributes the entry cost c_in over the node's
/// subnetwork, writing tolls at the leaves.  Driven by solve; exposed for
/// tests.
void place_tolls(const SPTree& tree, const Game& game, const Annotation& ann,
                 const std::vector<TollabilityList>& lists, int node, const Rational& c_in,
                 TollVector& out);

/// Minimum-support tolls making `state` a pure Nash equilibrium, for a
/// symmetric game on an already-decomposed network.  The tree must carry
/// exactly the game's edges and be oriented with the players.
SolveResult solve_on_tree(const SPTree& tree, const Game& game, const State& state,
                          SolveDebug* debug = nullptr);

/// Same, recognizing the game's network first.  Throws not_symmetric or
/// not_series_parallel when the game is out of scope.
SolveResult solve(const Game& game, const State& state, SolveDebug* debug = nullptr);

}  // namespace mintb
