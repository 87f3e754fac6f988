#include "mintb/random_instances.hpp"

#include <algorithm>
#include <string>

#include "mintb/errors.hpp"

namespace mintb {

int Rng::uniform(int lo, int hi) {
  if (lo > hi) throw internal_error("empty uniform range");
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

namespace {

std::string padded_edge_id(int index, int width) {
  std::string digits = std::to_string(index);
  return "e" + std::string(width > static_cast<int>(digits.size())
                               ? width - static_cast<int>(digits.size())
                               : 0,
                           '0') +
         digits;
}

// Random binary composition over edges [lo, hi) as a parse term.
std::string random_term(Rng& rng, int lo, int hi, int width) {
  if (hi - lo == 1) return "e(" + padded_edge_id(lo + 1, width) + ")";
  int split = rng.uniform(lo + 1, hi - 1);
  const char* op = rng.coin() ? "S" : "P";
  return std::string(op) + "(" + random_term(rng, lo, split, width) + "," +
         random_term(rng, split, hi, width) + ")";
}

std::vector<Rational> sorted_table(Rng& rng, int entries, int max_cost) {
  std::vector<int> values(entries);
  for (int& v : values) v = rng.uniform(0, max_cost);
  std::sort(values.begin(), values.end());
  return std::vector<Rational>(values.begin(), values.end());
}

}  // namespace

SPTree random_sp_tree(Rng& rng, int num_edges) {
  if (num_edges < 1) throw validation_error("a series-parallel tree needs at least one edge");
  int width = static_cast<int>(std::to_string(num_edges).size());
  return parse_term(random_term(rng, 0, num_edges, width));
}

RandomSpGame random_sp_game(Rng& rng, int num_edges, int num_players, int max_cost) {
  if (num_players < 1) throw validation_error("need at least one player");
  SPTree tree = random_sp_tree(rng, num_edges);
  Multigraph graph = flatten(tree);

  std::vector<Player> players;
  for (int i = 1; i <= num_players; ++i) players.push_back(Player{i, "s", "t"});

  std::vector<std::vector<Rational>> tables;
  for (int e = 0; e < graph.edge_count(); ++e)
    tables.push_back(sorted_table(rng, num_players + 1, max_cost));

  Game game(std::move(graph), std::move(players), std::move(tables));
  return RandomSpGame{std::move(tree), std::move(game)};
}

namespace {

void descend(Rng& rng, const SPTree& tree, int node_idx, Path& out) {
  const SPNode& node = tree.node(node_idx);
  switch (node.kind) {
    case SPKind::LEAF:
      out.push_back(node.edges[rng.uniform(0, static_cast<int>(node.edges.size()) - 1)]);
      return;
    case SPKind::SERIES:
      descend(rng, tree, node.left, out);
      descend(rng, tree, node.right, out);
      return;
    case SPKind::PARALLEL:
      descend(rng, tree, rng.coin() ? node.left : node.right, out);
      return;
  }
  throw internal_error("unknown node kind");
}

}  // namespace

State random_sp_state(Rng& rng, const SPTree& tree, const Game& game) {
  State state;
  for (const Player& p : game.players()) {
    Path path;
    descend(rng, tree, tree.root, path);
    state.set_path(p.id, std::move(path));
  }
  return state;
}

Game random_small_game(Rng& rng, int num_nodes, int num_edges, int num_players, int max_cost) {
  if (num_nodes < 2) throw validation_error("need at least two nodes");
  if (num_edges < num_nodes - 1)
    throw validation_error("need at least num_nodes - 1 edges for connectivity");

  std::vector<NodeId> nodes;
  for (int i = 1; i <= num_nodes; ++i) nodes.push_back("n" + std::to_string(i));

  int width = static_cast<int>(std::to_string(num_edges).size());
  std::vector<Edge> edges;
  for (int v = 2; v <= num_nodes; ++v) {
    int u = rng.uniform(1, v - 1);
    edges.push_back(Edge{padded_edge_id(static_cast<int>(edges.size()) + 1, width),
                         nodes[u - 1], nodes[v - 1]});
  }
  while (static_cast<int>(edges.size()) < num_edges) {
    int u = rng.uniform(1, num_nodes);
    int v = rng.uniform(1, num_nodes - 1);
    if (v >= u) ++v;  // distinct endpoints, uniform over ordered pairs
    edges.push_back(Edge{padded_edge_id(static_cast<int>(edges.size()) + 1, width),
                         nodes[u - 1], nodes[v - 1]});
  }

  std::vector<Player> players;
  for (int i = 1; i <= num_players; ++i) {
    int s = rng.uniform(1, num_nodes);
    int t = rng.uniform(1, num_nodes - 1);
    if (t >= s) ++t;
    players.push_back(Player{i, nodes[s - 1], nodes[t - 1]});
  }

  std::vector<std::vector<Rational>> tables;
  for (int e = 0; e < num_edges; ++e)
    tables.push_back(sorted_table(rng, num_players + 1, max_cost));

  return Game(Multigraph(std::move(nodes), std::move(edges)), std::move(players),
              std::move(tables));
}

namespace {

struct RandomWalk {
  const Game& game;
  Rng& rng;
  std::vector<char> visited;
  Path path;
  int sink;

  RandomWalk(const Game& g, Rng& r) : game(g), rng(r), visited(g.graph().node_count(), 0) {}

  bool dfs(int x) {
    if (x == sink) return true;
    visited[x] = 1;
    std::vector<Multigraph::Arc> arcs = game.graph().adjacency(x);
    std::shuffle(arcs.begin(), arcs.end(), rng.engine());
    for (const auto& arc : arcs) {
      if (visited[arc.to]) continue;
      path.push_back(game.graph().edge(arc.edge).id);
      if (dfs(arc.to)) return true;
      path.pop_back();
    }
    return false;
  }
};

}  // namespace

State random_state_any(Rng& rng, const Game& game) {
  State state;
  for (const Player& p : game.players()) {
    RandomWalk walk(game, rng);
    walk.sink = game.graph().node_index(p.sink);
    if (!walk.dfs(game.graph().node_index(p.source)))
      throw internal_error("no path found in a validated game");
    state.set_path(p.id, std::move(walk.path));
  }
  return state;
}

TollVector random_tolls(Rng& rng, const Game& game, int max_edges, int max_toll) {
  int count = rng.uniform(0, std::min(max_edges, game.graph().edge_count()));
  std::vector<int> indices(game.graph().edge_count());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
  std::shuffle(indices.begin(), indices.end(), rng.engine());

  std::map<EdgeId, Rational> tolls;
  for (int i = 0; i < count; ++i)
    tolls.emplace(game.graph().edge(indices[i]).id, Rational(rng.uniform(1, max_toll)));
  return TollVector(std::move(tolls));
}

CnfFormula random_formula(Rng& rng, int num_vars, int num_clauses, int max_clause_size) {
  if (num_vars < 1) throw validation_error("need at least one variable");
  CnfFormula formula;
  formula.num_vars = num_vars;
  std::vector<int> vars(num_vars);
  for (int i = 0; i < num_vars; ++i) vars[i] = i + 1;
  for (int j = 0; j < num_clauses; ++j) {
    int size = rng.uniform(1, std::min(max_clause_size, num_vars));
    std::shuffle(vars.begin(), vars.end(), rng.engine());
    Clause clause;
    for (int k = 0; k < size; ++k) clause.push_back(Literal{vars[k], rng.coin()});
    std::sort(clause.begin(), clause.end(),
              [](const Literal& a, const Literal& b) { return a.var < b.var; });
    formula.clauses.push_back(std::move(clause));
  }
  formula.validate();
  return formula;
}

}  // namespace mintb
