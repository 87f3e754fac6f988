#pragma once

#include <cstdint>
#include <random>

#include "mintb/game.hpp"
#include "mintb/reduction.hpp"
#include "mintb/sp_tree.hpp"

namespace mintb {

/// Seeded generator so every random instance is reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi], inclusive.
  int uniform(int lo, int hi);
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

struct RandomSpGame {
  SPTree tree;
  Game game;
};

/// Random series-parallel parse tree over num_edges single-edge leaves with
/// zero-padded ids ("e01", ...), spanning "s" -> "t".
SPTree random_sp_tree(Rng& rng, int num_edges);

/// Symmetric game on a random series-parallel network: num_players players
/// from "s" to "t", each cost table an independent sorted sample from
/// [0, max_cost].
RandomSpGame random_sp_game(Rng& rng, int num_edges, int num_players, int max_cost);

/// State of a symmetric SP game built by descending the parse tree: series
/// concatenates, parallel picks one side at random, leaves pick one bundle
/// edge at random.
State random_sp_state(Rng& rng, const SPTree& tree, const Game& game);

/// Connected random multigraph game (spanning tree plus random extra edges,
/// parallel edges allowed) with random distinct source/sink per player.
Game random_small_game(Rng& rng, int num_nodes, int num_edges, int num_players, int max_cost);

/// One random simple source->sink path per player (randomized DFS).
State random_state_any(Rng& rng, const Game& game);

/// Integer tolls in [1, max_toll] on up to max_edges random edges.
TollVector random_tolls(Rng& rng, const Game& game, int max_edges, int max_toll);

/// Random CNF with num_clauses clauses of 1..max_clause_size distinct
/// variables, polarities by coin flip.
CnfFormula random_formula(Rng& rng, int num_vars, int num_clauses, int max_clause_size);

}  // namespace mintb
