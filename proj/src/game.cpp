#include "mintb/game.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "mintb/errors.hpp"

namespace mintb {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw validation_error(msg);
}

}  // namespace

// -- Multigraph -------------------------------------------------------------

Multigraph::Multigraph(std::vector<NodeId> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    require(!nodes_[i].empty(), "empty node id");
    require(node_index_.emplace(nodes_[i], i).second, "duplicate node id '" + nodes_[i] + "'");
  }
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    const Edge& e = edges_[i];
    require(!e.id.empty(), "empty edge id");
    require(edge_index_.emplace(e.id, i).second, "duplicate edge id '" + e.id + "'");
    require(node_index_.count(e.u) > 0, "edge '" + e.id + "' references unknown node '" + e.u + "'");
    require(node_index_.count(e.v) > 0, "edge '" + e.id + "' references unknown node '" + e.v + "'");
    require(e.u != e.v, "edge '" + e.id + "' is a self-loop");
  }
  adjacency_.resize(nodes_.size());
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    adjacency_[node_index_.at(edges_[i].u)].push_back({i, node_index_.at(edges_[i].v)});
    adjacency_[node_index_.at(edges_[i].v)].push_back({i, node_index_.at(edges_[i].u)});
  }
  for (auto& arcs : adjacency_) {
    std::sort(arcs.begin(), arcs.end(), [this](const Arc& a, const Arc& b) {
      return edges_[a.edge].id < edges_[b.edge].id;
    });
  }
}

int Multigraph::node_index(const NodeId& id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) throw validation_error("unknown node '" + id + "'");
  return it->second;
}

int Multigraph::edge_index(const EdgeId& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw validation_error("unknown edge '" + id + "'");
  return it->second;
}

int Multigraph::other_endpoint(int edge_idx, int node_idx) const {
  const Edge& e = edges_.at(edge_idx);
  int u = node_index_.at(e.u), v = node_index_.at(e.v);
  if (node_idx == u) return v;
  if (node_idx == v) return u;
  throw internal_error("node is not an endpoint of edge '" + e.id + "'");
}

// -- Game -------------------------------------------------------------------

Game::Game(Multigraph graph, std::vector<Player> players,
           std::vector<std::vector<Rational>> cost_tables)
    : graph_(std::move(graph)), players_(std::move(players)), cost_tables_(std::move(cost_tables)) {
  require(!players_.empty(), "game has no players");
  for (int i = 0; i < static_cast<int>(players_.size()); ++i) {
    const Player& p = players_[i];
    require(player_index_.emplace(p.id, i).second,
            "duplicate player id " + std::to_string(p.id));
    require(graph_.has_node(p.source),
            "player " + std::to_string(p.id) + " has unknown source '" + p.source + "'");
    require(graph_.has_node(p.sink),
            "player " + std::to_string(p.id) + " has unknown sink '" + p.sink + "'");
    require(p.source != p.sink, "player " + std::to_string(p.id) + " has source == sink");
  }
  require(static_cast<int>(cost_tables_.size()) == graph_.edge_count(),
          "expected one cost table per edge");
  const int n = player_count();
  for (int e = 0; e < graph_.edge_count(); ++e) {
    const auto& table = cost_tables_[e];
    require(static_cast<int>(table.size()) == n + 1,
            "cost table for edge '" + graph_.edge(e).id + "' must have " + std::to_string(n + 1) +
                " entries (one per load 1.." + std::to_string(n + 1) + ")");
    for (int k = 0; k < n + 1; ++k) {
      require(!table[k].is_negative(),
              "cost table for edge '" + graph_.edge(e).id + "' has a negative entry");
      if (k > 0)
        require(table[k - 1] <= table[k],
                "cost table for edge '" + graph_.edge(e).id + "' is not nondecreasing");
    }
  }
  // Every player must be able to route at all: BFS over the raw graph.
  for (const Player& p : players_) {
    std::vector<char> seen(graph_.node_count(), 0);
    std::queue<int> q;
    int s = graph_.node_index(p.source);
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (const auto& arc : graph_.adjacency(x)) {
        if (!seen[arc.to]) {
          seen[arc.to] = 1;
          q.push(arc.to);
        }
      }
    }
    require(seen[graph_.node_index(p.sink)] != 0,
            "player " + std::to_string(p.id) + " cannot reach its sink");
  }
}

const Player& Game::player(PlayerId id) const {
  auto it = player_index_.find(id);
  if (it == player_index_.end())
    throw validation_error("unknown player id " + std::to_string(id));
  return players_[it->second];
}

const Rational& Game::cost(int edge_idx, int load) const {
  const auto& table = cost_tables_.at(edge_idx);
  if (load < 1 || load > static_cast<int>(table.size()))
    throw validation_error("load " + std::to_string(load) + " outside cost table for edge '" +
                           graph_.edge(edge_idx).id + "'");
  return table[load - 1];
}

bool Game::is_symmetric() const { return symmetric_terminals().has_value(); }

std::optional<std::pair<NodeId, NodeId>> Game::symmetric_terminals() const {
  const Player& first = players_.front();
  for (const Player& p : players_)
    if (p.source != first.source || p.sink != first.sink) return std::nullopt;
  return std::make_pair(first.source, first.sink);
}

// -- State / TollVector -----------------------------------------------------

const Path& State::path(PlayerId id) const {
  auto it = paths_.find(id);
  if (it == paths_.end())
    throw validation_error("state has no path for player " + std::to_string(id));
  return it->second;
}

TollVector::TollVector(std::map<EdgeId, Rational> tolls) {
  for (auto& [id, value] : tolls) {
    if (value.is_negative()) throw validation_error("negative toll on edge '" + id + "'");
    if (!value.is_zero()) tolls_.emplace(id, std::move(value));
  }
}

const Rational& TollVector::get(const EdgeId& id) const {
  static const Rational zero;
  auto it = tolls_.find(id);
  return it == tolls_.end() ? zero : it->second;
}

void TollVector::set(const EdgeId& id, Rational value) {
  if (value.is_negative()) throw validation_error("negative toll on edge '" + id + "'");
  if (value.is_zero())
    tolls_.erase(id);
  else
    tolls_[id] = std::move(value);
}

std::vector<EdgeId> TollVector::support() const {
  std::vector<EdgeId> out;
  out.reserve(tolls_.size());
  for (const auto& [id, value] : tolls_) out.push_back(id);
  return out;
}

// -- validation -------------------------------------------------------------

namespace {

// Walks the path, checking incidence and simplicity, and returns the visited
// edge indexes.  Throws validation_error with the player id in the message.
std::vector<int> check_path(const Game& game, PlayerId id, const Path& path) {
  const Multigraph& g = game.graph();
  const Player& p = game.player(id);
  const std::string who = "player " + std::to_string(id);
  if (path.empty()) throw validation_error(who + " has an empty path");
  std::vector<int> edge_idxs;
  std::set<int> visited_nodes;
  int cur = g.node_index(p.source);
  visited_nodes.insert(cur);
  for (const EdgeId& eid : path) {
    int e = g.edge_index(eid);
    const Edge& edge = g.edge(e);
    int u = g.node_index(edge.u), v = g.node_index(edge.v);
    int next;
    if (cur == u)
      next = v;
    else if (cur == v)
      next = u;
    else
      throw validation_error(who + ": edge '" + eid + "' is not incident to the walk");
    if (!visited_nodes.insert(next).second)
      throw validation_error(who + ": path revisits node '" + g.node(next) + "'");
    edge_idxs.push_back(e);
    cur = next;
  }
  if (cur != g.node_index(p.sink))
    throw validation_error(who + ": path does not end at the sink");
  return edge_idxs;
}

}  // namespace

std::vector<int> edge_loads(const Game& game, const State& state) {
  for (const auto& [id, path] : state.paths())
    if (!game.has_player(id))
      throw validation_error("state routes unknown player " + std::to_string(id));
  std::vector<int> loads(game.graph().edge_count(), 0);
  for (const Player& p : game.players()) {
    for (int e : check_path(game, p.id, state.path(p.id))) ++loads[e];
  }
  return loads;
}

void validate_state(const Game& game, const State& state) { edge_loads(game, state); }

void validate_tolls(const Game& game, const TollVector& tolls) {
  for (const auto& [id, value] : tolls.entries()) {
    if (!game.graph().has_edge(id))
      throw validation_error("toll on unknown edge '" + id + "'");
    (void)value;  // vector invariant already guarantees value > 0
  }
}

// -- game operations --------------------------------------------------------

int congestion(const Game& game, const State& state, const EdgeId& edge) {
  game.graph().edge_index(edge);  // existence check
  int count = 0;
  for (const auto& [id, path] : state.paths())
    count += std::count(path.begin(), path.end(), edge) > 0 ? 1 : 0;
  return count;
}

namespace {

Rational path_cost_at_loads(const Game& game, const TollVector& tolls,
                            const std::vector<int>& loads, const Path& path) {
  Rational total;
  for (const EdgeId& eid : path) {
    int e = game.graph().edge_index(eid);
    total += game.cost(e, loads[e]) + tolls.get(eid);
  }
  return total;
}

}  // namespace

Rational player_cost(const Game& game, const TollVector& tolls, const State& state, PlayerId id) {
  std::vector<int> loads = edge_loads(game, state);
  return path_cost_at_loads(game, tolls, loads, state.path(id));
}

Rational social_cost(const Game& game, const State& state) {
  std::vector<int> loads = edge_loads(game, state);
  Rational total;
  for (int e = 0; e < game.graph().edge_count(); ++e)
    if (loads[e] > 0) total += game.cost(e, loads[e]) * Rational(loads[e]);
  return total;
}

// -- shortest deviation -----------------------------------------------------

namespace {

// Cheapest simple source->sink path under fixed nonnegative edge weights, ties
// broken toward the lexicographically smallest edge-id sequence.  Dijkstra
// from the sink gives exact distances; a backtracking DFS then peels off the
// lex-min shortest path.  Backtracking matters only on zero-weight edges,
// where a locally tight arc can still lead into a dead end of already-visited
// nodes.
struct PathFinder {
  const Multigraph& g;
  const std::vector<Rational>& weight;  // by edge index
  std::vector<Rational> dist;           // to sink
  std::vector<char> reachable;          // dist is meaningful
  std::vector<char> visited;
  std::vector<EdgeId> best;
  int sink = -1;

  PathFinder(const Multigraph& graph, const std::vector<Rational>& w, int sink_idx)
      : g(graph), weight(w), dist(graph.node_count()), reachable(graph.node_count(), 0),
        visited(graph.node_count(), 0), sink(sink_idx) {
    using Item = std::pair<Rational, int>;
    auto cmp = [](const Item& a, const Item& b) { return b.first < a.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    dist[sink] = Rational(0);
    reachable[sink] = 1;
    heap.push({Rational(0), sink});
    std::vector<char> done(g.node_count(), 0);
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (done[x]) continue;
      done[x] = 1;
      for (const auto& arc : g.adjacency(x)) {
        Rational nd = d + weight[arc.edge];
        if (!reachable[arc.to] || nd < dist[arc.to]) {
          reachable[arc.to] = 1;
          dist[arc.to] = nd;
          heap.push({nd, arc.to});
        }
      }
    }
  }

  // Extends the current prefix from node x; true once the sink is reached.
  bool dfs(int x) {
    if (x == sink) return true;
    visited[x] = 1;
    for (const auto& arc : g.adjacency(x)) {
      if (visited[arc.to] || !reachable[arc.to]) continue;
      if (weight[arc.edge] + dist[arc.to] != dist[x]) continue;  // not on a shortest path
      best.push_back(g.edge(arc.edge).id);
      if (dfs(arc.to)) return true;
      best.pop_back();
    }
    visited[x] = 0;
    return false;
  }
};

RoutedPath cheapest_path(const Game& game, const std::vector<Rational>& weights,
                         const NodeId& source, const NodeId& sink) {
  const Multigraph& g = game.graph();
  int s = g.node_index(source), t = g.node_index(sink);
  if (s == t) throw validation_error("path query with source == sink");
  PathFinder finder(g, weights, t);
  if (!finder.reachable[s]) throw validation_error("sink not reachable from '" + source + "'");
  if (!finder.dfs(s)) throw internal_error("shortest-path extraction failed");
  return {finder.best, finder.dist[s]};
}

}  // namespace

RoutedPath best_response(const Game& game, const TollVector& tolls, const State& state,
                         PlayerId id) {
  validate_tolls(game, tolls);
  std::vector<int> loads = edge_loads(game, state);
  const Path& own = state.path(id);
  std::vector<char> on_own(game.graph().edge_count(), 0);
  for (const EdgeId& eid : own) on_own[game.graph().edge_index(eid)] = 1;
  // Price of using edge e after the deviation: the player's own unit stays on
  // e if e was already on its path, otherwise it arrives on top of the load.
  std::vector<Rational> weights(game.graph().edge_count());
  for (int e = 0; e < game.graph().edge_count(); ++e) {
    int load = on_own[e] ? loads[e] : loads[e] + 1;
    weights[e] = game.cost(e, load) + tolls.get(game.graph().edge(e).id);
  }
  const Player& p = game.player(id);
  return cheapest_path(game, weights, p.source, p.sink);
}

RoutedPath cheapest_entry(const Game& game, const TollVector& tolls, const State& state,
                          const NodeId& source, const NodeId& sink) {
  validate_tolls(game, tolls);
  std::vector<int> loads = edge_loads(game, state);
  std::vector<Rational> weights(game.graph().edge_count());
  for (int e = 0; e < game.graph().edge_count(); ++e)
    weights[e] = game.cost(e, loads[e] + 1) + tolls.get(game.graph().edge(e).id);
  return cheapest_path(game, weights, source, sink);
}

PneVerdict is_pne(const Game& game, const TollVector& tolls, const State& state) {
  validate_tolls(game, tolls);
  std::vector<int> loads = edge_loads(game, state);
  for (const Player& p : game.players()) {
    Rational current = path_cost_at_loads(game, tolls, loads, state.path(p.id));
    RoutedPath br = best_response(game, tolls, state, p.id);
    if (br.cost < current) {
      PneVerdict v;
      v.pne = false;
      v.player = p.id;
      v.improving_path = br.path;
      v.current_cost = current;
      v.improved_cost = br.cost;
      return v;
    }
  }
  return PneVerdict{};
}

}  // namespace mintb
