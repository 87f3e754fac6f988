#include "mintb/solver.hpp"

#include <algorithm>
#include <map>

#include "mintb/errors.hpp"

namespace mintb {

namespace {

// Highest cost a resident of `node` ends up paying inside it once the node's
// own pinning tolls are in place (a dry run of place_tolls at its lambda0).
// Pinning tolls land on used edges too, so this can exceed the untolled
// maximum; a parallel sibling must price entry against this value, or the
// pushed-up residents would migrate across.  For a leaf the two coincide:
// tolls only lift a used edge up to the bundle's residents' maximum.
Rational pinned_ceiling(const SPTree& tree, const Game& game, const Annotation& ann,
                        const std::vector<TollabilityList>& lists, int node) {
  const auto& residents = ann.node_players[node];
  if (residents.empty()) return Rational(0);
  if (tree.node(node).kind == SPKind::LEAF) return ann.cmax[node];
  TollVector pins;
  place_tolls(tree, game, ann, lists, node, lists[node].lambda0.value(), pins);
  std::map<PlayerId, Rational> extra;
  for (const auto& [id, toll] : pins.entries())
    for (PlayerId rider : ann.edge_players[game.graph().edge_index(id)]) extra[rider] += toll;
  Rational top = ann.cmax[node];
  for (const auto& [player, cost] : residents) {
    auto it = extra.find(player);
    if (it == extra.end()) continue;
    Rational total = cost + it->second;
    if (total > top) top = total;
  }
  return top;
}

void build_node(const SPTree& tree, const Game& game, const Annotation& ann, int idx,
                std::vector<TollabilityList>& lists) {
  const SPNode& n = tree.node(idx);
  if (n.kind == SPKind::LEAF) {
    std::vector<LeafEdge> edges;
    edges.reserve(n.edges.size());
    for (const EdgeId& id : n.edges) {
      int e = game.graph().edge_index(id);
      LeafEdge le;
      le.id = id;
      le.used = ann.loads[e] > 0;
      if (le.used) le.cost_now = game.cost(e, ann.loads[e]);
      le.cost_plus = game.cost(e, ann.loads[e] + 1);
      edges.push_back(std::move(le));
    }
    lists[idx] = leaf_list(edges);
    return;
  }
  build_node(tree, game, ann, n.left, lists);
  build_node(tree, game, ann, n.right, lists);
  if (n.kind == SPKind::SERIES)
    lists[idx] = compose_series(lists[n.left], lists[n.right]);
  else
    lists[idx] = compose_parallel(lists[n.left], lists[n.right],
                                  pinned_ceiling(tree, game, ann, lists, n.left),
                                  pinned_ceiling(tree, game, ann, lists, n.right));
}

// The split handed to a child must re-select the same entry the parent's
// pointer recorded: strictly above the previous lambda, at most its own.
void check_split(const TollabilityList& list, int idx, const Rational& c_out) {
  if (idx == 0) {
    if (ExtCost(c_out) < list.lambda0) throw internal_error("series split below lambda0");
  } else if (ExtCost(c_out) <= list.entries[idx - 1].lambda) {
    throw internal_error("series split not above the previous entry");
  }
  if (ExtCost(c_out) > list.entries[idx].lambda)
    throw internal_error("series split overshoots its entry");
}

}  // namespace

std::vector<TollabilityList> build_lists(const SPTree& tree, const Game& game,
                                         const Annotation& ann) {
  std::vector<TollabilityList> lists(tree.size());
  build_node(tree, game, ann, tree.root, lists);
  return lists;
}

void place_tolls(const SPTree& tree, const Game& game, const Annotation& ann,
                 const std::vector<TollabilityList>& lists, int node, const Rational& c_in,
                 TollVector& out) {
  const SPNode& n = tree.node(node);
  if (n.kind == SPKind::LEAF) {
    for (const EdgeId& id : n.edges) {
      int e = game.graph().edge_index(id);
      Rational plus = game.cost(e, ann.loads[e] + 1);
      if (plus < c_in) out.set(id, c_in - plus);
    }
    return;
  }
  const TollabilityList& list = lists[node];
  const TollabilityList& lv = lists[n.left];
  const TollabilityList& lw = lists[n.right];
  const TollabilityEntry& entry = list.entries[list.first_index_reaching(ExtCost(c_in))];
  if (n.kind == SPKind::SERIES) {
    const ExtCost& lambda_k = lw.entries[entry.idx_w].lambda;
    Rational cap = c_in - lv.lambda0.value();
    Rational c_out_w = lambda_k.infinite() ? cap : std::min(lambda_k.value(), cap);
    Rational c_out_v = c_in - c_out_w;
    check_split(lv, entry.idx_v, c_out_v);
    check_split(lw, entry.idx_w, c_out_w);
    place_tolls(tree, game, ann, lists, n.left, c_out_v, out);
    place_tolls(tree, game, ann, lists, n.right, c_out_w, out);
  } else {
    place_tolls(tree, game, ann, lists, n.left, std::max(c_in, lv.lambda0.value()), out);
    place_tolls(tree, game, ann, lists, n.right, std::max(c_in, lw.lambda0.value()), out);
  }
}

SolveResult solve_on_tree(const SPTree& tree, const Game& game, const State& state,
                          SolveDebug* debug) {
  Annotation ann = annotate(tree, game, state);
  std::vector<TollabilityList> lists = build_lists(tree, game, ann);
  const TollabilityList& root = lists[tree.root];

  SolveResult result;
  result.entry_floor = root.lambda0.value();
  place_tolls(tree, game, ann, lists, tree.root, result.entry_floor, result.tolls);
  result.tolled_edges = result.tolls.support_size();
  if (result.tolled_edges != root.eta_min())
    throw internal_error("placed " + std::to_string(result.tolled_edges) +
                         " tolls but the root list promises " + std::to_string(root.eta_min()));
  if (debug) {
    debug->tree = tree;
    debug->annotation = std::move(ann);
    debug->lists = std::move(lists);
  }
  return result;
}

SolveResult solve(const Game& game, const State& state, SolveDebug* debug) {
  auto terminals = game.symmetric_terminals();
  if (!terminals) throw not_symmetric("solver requires a symmetric game");
  auto tree = recognize(game.graph(), terminals->first, terminals->second);
  if (!tree) throw not_series_parallel("network is not two-terminal series-parallel");
  return solve_on_tree(*tree, game, state, debug);
}

}  // namespace mintb
