#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mintb/game.hpp"

namespace mintb {

enum class SPKind { LEAF, SERIES, PARALLEL };

/// Parse-tree node of a two-terminal series-parallel network.  LEAF nodes hold
/// a bundle of parallel links between their two terminals; inner nodes compose
/// their children in series (left.sink == right.source == the hidden middle
/// terminal) or in parallel (children share both terminals).
struct SPNode {
  SPKind kind = SPKind::LEAF;
  int left = -1, right = -1;   // arena indices, inner nodes only
  std::vector<EdgeId> edges;   // leaf bundles only
  NodeId source, sink;
};

struct SPTree {
  std::vector<SPNode> nodes;  // arena; no ordering guarantees beyond validity
  int root = -1;

  const SPNode& node(int idx) const { return nodes.at(idx); }
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Structural sanity check: terminal consistency, nonempty bundles, globally
/// unique edge ids.  Throws validation_error on the first violation.
void validate_tree(const SPTree& tree);

/// Term grammar: T ::= e(<id>) | B(<id>,...) | S(T,T) | P(T,T), whitespace
/// insensitive.  Ids may contain anything except '(' ')' ',' and whitespace.
/// Graph node names are synthesized: the root spans "s" -> "t" and series
/// midpoints become "m1", "m2", ... in creation order.
SPTree parse_term(const std::string& text);

/// Canonical term text: singleton leaves as e(id), bundles as B(a,b,...).
std::string to_term(const SPTree& tree);

/// Expands the tree into the multigraph it denotes.  Nodes appear in
/// first-visit (preorder) order, edges in leaf order.
Multigraph flatten(const SPTree& tree);

/// SP recognition by reduction: repeatedly merge parallel super-edges and
/// contract internal degree-2 nodes.  Returns a normalized tree oriented
/// source -> sink, or nullopt when the graph is not two-terminal
/// series-parallel.
std::optional<SPTree> recognize(const Multigraph& graph, const NodeId& source, const NodeId& sink);

/// Collapses every maximal parallel combination of single-edge components over
/// one terminal pair into a LEAF bundle; the bundle takes the position of the
/// first such component and remaining components are rebuilt left-associated.
SPTree normalize(const SPTree& tree);

/// The same network with source and sink exchanged (series children swap).
SPTree flipped(const SPTree& tree);

/// Per-node view of a state on the tree: which players traverse each node's
/// subnetwork, what each of them pays inside it, and the resulting edge loads.
struct Annotation {
  // Indexed by arena index; (player, within-node cost) sorted by player id.
  std::vector<std::vector<std::pair<PlayerId, Rational>>> node_players;
  std::vector<Rational> cmax;    // max within-node player cost, 0 when unused
  std::vector<int> loads;        // by graph edge index
  // By graph edge index: the players whose path runs over the edge.
  std::vector<std::vector<PlayerId>> edge_players;

  const Rational& cost_of(int node, PlayerId player) const;
};

/// Decomposes every player's path over the tree bottom-up.  Requires a
/// symmetric game whose graph carries exactly the tree's edges, with the tree
/// oriented from the players' shared source to their shared sink.
Annotation annotate(const SPTree& tree, const Game& game, const State& state);

}  // namespace mintb
