#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mintb/rational.hpp"

namespace mintb {

using NodeId = std::string;
using EdgeId = std::string;
using PlayerId = int;

/// A path is the edge-id sequence of a simple walk; node sequence is implied.
using Path = std::vector<EdgeId>;

struct Edge {
  EdgeId id;
  NodeId u, v;
};

/// Undirected multigraph.  Parallel edges are allowed, self-loops are not.
/// Adjacency lists are kept sorted by edge id so that every traversal in the
/// library is deterministic.
class Multigraph {
 public:
  struct Arc {
    int edge;  // edge index
    int to;    // neighbour node index
  };

  Multigraph() = default;
  Multigraph(std::vector<NodeId> nodes, std::vector<Edge> edges);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const NodeId& node(int idx) const { return nodes_.at(idx); }
  const Edge& edge(int idx) const { return edges_.at(idx); }

  bool has_node(const NodeId& id) const { return node_index_.count(id) > 0; }
  bool has_edge(const EdgeId& id) const { return edge_index_.count(id) > 0; }
  int node_index(const NodeId& id) const;
  int edge_index(const EdgeId& id) const;
  const std::vector<Arc>& adjacency(int node_idx) const { return adjacency_.at(node_idx); }
  int other_endpoint(int edge_idx, int node_idx) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::map<NodeId, int> node_index_;
  std::map<EdgeId, int> edge_index_;
  std::vector<std::vector<Arc>> adjacency_;
};

struct Player {
  PlayerId id = 0;
  NodeId source, sink;
};

/// Atomic network congestion game: a multigraph, players with terminal pairs,
/// and one load-dependent cost table per edge.  Table k holds the per-player
/// cost when k players share the edge, for k = 1 .. n+1 (the extra slot prices
/// a hypothetical entrant).  Tables must be nonnegative and nondecreasing.
class Game {
 public:
  Game(Multigraph graph, std::vector<Player> players,
       std::vector<std::vector<Rational>> cost_tables);

  const Multigraph& graph() const { return graph_; }
  const std::vector<Player>& players() const { return players_; }
  int player_count() const { return static_cast<int>(players_.size()); }
  const Player& player(PlayerId id) const;
  bool has_player(PlayerId id) const { return player_index_.count(id) > 0; }

  /// Cost of one edge at the given load (1-based, load <= player_count()+1).
  const Rational& cost(int edge_idx, int load) const;
  const std::vector<Rational>& cost_table(int edge_idx) const { return cost_tables_.at(edge_idx); }

  bool is_symmetric() const;
  /// Shared (source, sink) of a symmetric game; nullopt otherwise.
  std::optional<std::pair<NodeId, NodeId>> symmetric_terminals() const;

 private:
  Multigraph graph_;
  std::vector<Player> players_;
  std::vector<std::vector<Rational>> cost_tables_;
  std::map<PlayerId, int> player_index_;
};

/// One strategy per player: the path it routes its unit over.
class State {
 public:
  State() = default;
  explicit State(std::map<PlayerId, Path> paths) : paths_(std::move(paths)) {}

  const std::map<PlayerId, Path>& paths() const { return paths_; }
  const Path& path(PlayerId id) const;
  void set_path(PlayerId id, Path p) { paths_[id] = std::move(p); }
  bool has_path(PlayerId id) const { return paths_.count(id) > 0; }

 private:
  std::map<PlayerId, Path> paths_;
};

/// Nonnegative per-edge tolls.  Only strictly positive entries are stored, so
/// the key set is exactly the support ("tolled edges").
class TollVector {
 public:
  TollVector() = default;
  explicit TollVector(std::map<EdgeId, Rational> tolls);

  const Rational& get(const EdgeId& id) const;
  void set(const EdgeId& id, Rational value);
  const std::map<EdgeId, Rational>& entries() const { return tolls_; }
  std::vector<EdgeId> support() const;
  int support_size() const { return static_cast<int>(tolls_.size()); }

 private:
  std::map<EdgeId, Rational> tolls_;
};

// -- validation -------------------------------------------------------------

/// Checks that every player's path is a simple source-to-sink walk and returns
/// the per-edge-index load vector of the state.
std::vector<int> edge_loads(const Game& game, const State& state);
void validate_state(const Game& game, const State& state);
void validate_tolls(const Game& game, const TollVector& tolls);

// -- game operations --------------------------------------------------------

int congestion(const Game& game, const State& state, const EdgeId& edge);
Rational player_cost(const Game& game, const TollVector& tolls, const State& state, PlayerId id);
Rational social_cost(const Game& game, const State& state);

struct RoutedPath {
  Path path;
  Rational cost;
};

/// Cheapest deviation for one player, everything else fixed: edges on the
/// player's own path are priced at the current load, all others at load+1,
/// tolls added throughout.  Ties break toward the lexicographically smallest
/// edge-id sequence.
RoutedPath best_response(const Game& game, const TollVector& tolls, const State& state,
                         PlayerId id);

/// Cheapest source-to-sink path for a hypothetical extra player: every edge is
/// priced at load+1 plus its toll.
RoutedPath cheapest_entry(const Game& game, const TollVector& tolls, const State& state,
                          const NodeId& source, const NodeId& sink);

struct PneVerdict {
  bool pne = true;
  // Populated when pne == false: the first player (ascending id) that can
  // strictly improve, together with its improving path.
  PlayerId player = 0;
  Path improving_path;
  Rational current_cost;
  Rational improved_cost;
};

/// Pure Nash equilibrium test under the weak inequality: a profitable
/// deviation must be strictly cheaper.
PneVerdict is_pne(const Game& game, const TollVector& tolls, const State& state);

}  // namespace mintb
