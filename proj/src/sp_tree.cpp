#include "mintb/sp_tree.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mintb/errors.hpp"

namespace mintb {

// -- validation -------------------------------------------------------------

namespace {

void validate_node(const SPTree& tree, int idx, std::set<EdgeId>& seen) {
  const SPNode& n = tree.node(idx);
  if (n.source.empty() || n.sink.empty() || n.source == n.sink)
    throw validation_error("tree node with bad terminals");
  if (n.kind == SPKind::LEAF) {
    if (n.left != -1 || n.right != -1) throw validation_error("leaf with children");
    if (n.edges.empty()) throw validation_error("empty leaf bundle");
    for (const EdgeId& e : n.edges)
      if (!seen.insert(e).second) throw validation_error("duplicate edge id '" + e + "' in tree");
    return;
  }
  if (!n.edges.empty()) throw validation_error("inner node with edges");
  if (n.left < 0 || n.left >= tree.size() || n.right < 0 || n.right >= tree.size())
    throw validation_error("inner node with missing children");
  const SPNode& l = tree.node(n.left);
  const SPNode& r = tree.node(n.right);
  if (n.kind == SPKind::SERIES) {
    if (l.source != n.source || r.sink != n.sink || l.sink != r.source)
      throw validation_error("series children do not line up");
  } else {
    if (l.source != n.source || l.sink != n.sink || r.source != n.source || r.sink != n.sink)
      throw validation_error("parallel children do not share terminals");
  }
  validate_node(tree, n.left, seen);
  validate_node(tree, n.right, seen);
}

}  // namespace

void validate_tree(const SPTree& tree) {
  if (tree.root < 0 || tree.root >= tree.size()) throw validation_error("tree has no root");
  std::set<EdgeId> seen;
  validate_node(tree, tree.root, seen);
}

// -- term parsing -----------------------------------------------------------

namespace {

struct TermParser {
  const std::string& text;
  size_t pos = 0;
  SPTree tree;
  std::set<EdgeId> seen;

  explicit TermParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    if (peek() != c)
      throw parse_error("expected '" + std::string(1, c) + "' at offset " + std::to_string(pos));
    ++pos;
  }

  std::string read_id() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == ')' || c == ',' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos;
    }
    if (pos == start) throw parse_error("expected an edge id at offset " + std::to_string(start));
    return text.substr(start, pos - start);
  }

  void add_edge(std::vector<EdgeId>& bundle) {
    EdgeId id = read_id();
    if (!seen.insert(id).second) throw parse_error("duplicate edge id '" + id + "'");
    bundle.push_back(std::move(id));
  }

  int parse_node() {
    char head = peek();
    ++pos;
    expect('(');
    SPNode node;
    if (head == 'e') {
      add_edge(node.edges);
    } else if (head == 'B') {
      add_edge(node.edges);
      while (peek() == ',') {
        ++pos;
        add_edge(node.edges);
      }
    } else if (head == 'S' || head == 'P') {
      node.kind = head == 'S' ? SPKind::SERIES : SPKind::PARALLEL;
      node.left = parse_node();
      expect(',');
      node.right = parse_node();
    } else {
      throw parse_error("expected one of e/B/S/P at offset " + std::to_string(pos - 2));
    }
    expect(')');
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  // Terms carry no node names; synthesize them ("s", "t", midpoints "m1"...).
  void name_terminals(int idx, const NodeId& src, const NodeId& snk, int& next_mid) {
    SPNode& n = tree.nodes[idx];
    n.source = src;
    n.sink = snk;
    if (n.kind == SPKind::SERIES) {
      NodeId mid = "m" + std::to_string(++next_mid);
      name_terminals(n.left, src, mid, next_mid);
      name_terminals(n.right, mid, snk, next_mid);
    } else if (n.kind == SPKind::PARALLEL) {
      name_terminals(n.left, src, snk, next_mid);
      name_terminals(n.right, src, snk, next_mid);
    }
  }
};

}  // namespace

SPTree parse_term(const std::string& text) {
  TermParser p(text);
  p.tree.root = p.parse_node();
  if (p.peek() != '\0')
    throw parse_error("trailing input at offset " + std::to_string(p.pos));
  int mid = 0;
  p.name_terminals(p.tree.root, "s", "t", mid);
  validate_tree(p.tree);
  return std::move(p.tree);
}

namespace {

void term_of(const SPTree& tree, int idx, std::string& out) {
  const SPNode& n = tree.node(idx);
  switch (n.kind) {
    case SPKind::LEAF:
      if (n.edges.size() == 1) {
        out += "e(" + n.edges[0] + ")";
      } else {
        out += "B(";
        for (size_t i = 0; i < n.edges.size(); ++i) {
          if (i) out += ",";
          out += n.edges[i];
        }
        out += ")";
      }
      break;
    case SPKind::SERIES:
    case SPKind::PARALLEL:
      out += n.kind == SPKind::SERIES ? "S(" : "P(";
      term_of(tree, n.left, out);
      out += ",";
      term_of(tree, n.right, out);
      out += ")";
      break;
  }
}

}  // namespace

std::string to_term(const SPTree& tree) {
  std::string out;
  term_of(tree, tree.root, out);
  return out;
}

// -- flatten ----------------------------------------------------------------

namespace {

void collect_graph(const SPTree& tree, int idx, std::vector<NodeId>& nodes,
                   std::set<NodeId>& node_seen, std::vector<Edge>& edges) {
  const SPNode& n = tree.node(idx);
  if (node_seen.insert(n.source).second) nodes.push_back(n.source);
  if (node_seen.insert(n.sink).second) nodes.push_back(n.sink);
  if (n.kind == SPKind::LEAF) {
    for (const EdgeId& e : n.edges) edges.push_back({e, n.source, n.sink});
  } else {
    collect_graph(tree, n.left, nodes, node_seen, edges);
    collect_graph(tree, n.right, nodes, node_seen, edges);
  }
}

}  // namespace

Multigraph flatten(const SPTree& tree) {
  validate_tree(tree);
  std::vector<NodeId> nodes;
  std::set<NodeId> node_seen;
  std::vector<Edge> edges;
  collect_graph(tree, tree.root, nodes, node_seen, edges);
  return Multigraph(std::move(nodes), std::move(edges));
}

// -- flip / normalize -------------------------------------------------------

namespace {

int copy_flipped(const SPTree& in, int idx, SPTree& out) {
  const SPNode& n = in.node(idx);
  SPNode copy;
  copy.kind = n.kind;
  copy.source = n.sink;
  copy.sink = n.source;
  if (n.kind == SPKind::LEAF) {
    copy.edges = n.edges;
  } else if (n.kind == SPKind::SERIES) {
    copy.left = copy_flipped(in, n.right, out);
    copy.right = copy_flipped(in, n.left, out);
  } else {
    copy.left = copy_flipped(in, n.left, out);
    copy.right = copy_flipped(in, n.right, out);
  }
  out.nodes.push_back(std::move(copy));
  return static_cast<int>(out.nodes.size()) - 1;
}

}  // namespace

SPTree flipped(const SPTree& tree) {
  SPTree out;
  out.root = copy_flipped(tree, tree.root, out);
  return out;
}

namespace {

struct Normalizer {
  const SPTree& in;
  SPTree out;

  explicit Normalizer(const SPTree& t) : in(t) {}

  // Flattens a nested PARALLEL chain into its component subtrees, in order.
  void components(int idx, std::vector<int>& comps) {
    const SPNode& n = in.node(idx);
    if (n.kind == SPKind::PARALLEL) {
      components(n.left, comps);
      components(n.right, comps);
    } else {
      comps.push_back(idx);
    }
  }

  int emit(SPNode node) {
    out.nodes.push_back(std::move(node));
    return static_cast<int>(out.nodes.size()) - 1;
  }

  int rebuild(int idx) {
    const SPNode& n = in.node(idx);
    if (n.kind == SPKind::LEAF) return emit(n);
    if (n.kind == SPKind::SERIES) {
      SPNode node;
      node.kind = SPKind::SERIES;
      node.source = n.source;
      node.sink = n.sink;
      node.left = rebuild(n.left);
      node.right = rebuild(n.right);
      return emit(std::move(node));
    }
    // Parallel: merge every leaf component into one bundle at the first
    // leaf's position, keep other components in order, rebuild left-assoc.
    std::vector<int> comps;
    components(idx, comps);
    std::vector<int> rebuilt;  // out-arena indices
    int merged_at = -1;
    for (int c : comps) {
      if (in.node(c).kind == SPKind::LEAF) {
        if (merged_at == -1) {
          merged_at = static_cast<int>(rebuilt.size());
          rebuilt.push_back(emit(in.node(c)));
        } else {
          SPNode& bundle = out.nodes[rebuilt[merged_at]];
          const auto& extra = in.node(c).edges;
          bundle.edges.insert(bundle.edges.end(), extra.begin(), extra.end());
        }
      } else {
        rebuilt.push_back(rebuild(c));
      }
    }
    int acc = rebuilt[0];
    for (size_t i = 1; i < rebuilt.size(); ++i) {
      SPNode node;
      node.kind = SPKind::PARALLEL;
      node.source = n.source;
      node.sink = n.sink;
      node.left = acc;
      node.right = rebuilt[i];
      acc = emit(std::move(node));
    }
    return acc;
  }
};

}  // namespace

SPTree normalize(const SPTree& tree) {
  validate_tree(tree);
  Normalizer norm(tree);
  norm.out.root = norm.rebuild(tree.root);
  validate_tree(norm.out);
  return std::move(norm.out);
}

// -- recognition ------------------------------------------------------------

namespace {

// Reduction state: every live super-edge stands for an already-recognized SP
// subnetwork between two remaining graph nodes.
struct Recognizer {
  const Multigraph& g;
  SPTree arena;
  struct Super {
    int u, v;   // graph node indices, in the tree node's source->sink order
    int tree;   // arena index
    bool alive = true;
  };
  std::vector<Super> supers;
  std::vector<std::vector<int>> inc;  // node -> live super indices

  explicit Recognizer(const Multigraph& graph) : g(graph) {
    for (int e = 0; e < g.edge_count(); ++e) {
      SPNode leaf;
      leaf.edges = {g.edge(e).id};
      leaf.source = g.edge(e).u;
      leaf.sink = g.edge(e).v;
      arena.nodes.push_back(std::move(leaf));
      supers.push_back({g.node_index(g.edge(e).u), g.node_index(g.edge(e).v), e});
    }
  }

  int flip_tree(int idx) {
    const SPNode n = arena.nodes[idx];  // copy: arena may reallocate
    SPNode copy;
    copy.kind = n.kind;
    copy.source = n.sink;
    copy.sink = n.source;
    if (n.kind == SPKind::LEAF) {
      copy.edges = n.edges;
    } else if (n.kind == SPKind::SERIES) {
      copy.left = flip_tree(n.right);
      copy.right = flip_tree(n.left);
    } else {
      copy.left = flip_tree(n.left);
      copy.right = flip_tree(n.right);
    }
    arena.nodes.push_back(std::move(copy));
    return static_cast<int>(arena.nodes.size()) - 1;
  }

  // Tree handle for super s oriented from graph node `from`.
  int oriented(const Super& s, int from) { return s.u == from ? s.tree : flip_tree(s.tree); }

  void drop(int super_idx, int at_node) {
    auto& list = inc[at_node];
    list.erase(std::find(list.begin(), list.end(), super_idx));
  }

  int add_super(int u, int v, int tree) {
    supers.push_back({u, v, tree});
    int idx = static_cast<int>(supers.size()) - 1;
    inc[u].push_back(idx);
    inc[v].push_back(idx);
    return idx;
  }

  void retire(int super_idx) {
    Super& s = supers[super_idx];
    s.alive = false;
    drop(super_idx, s.u);
    drop(super_idx, s.v);
  }

  // Merges all live super-edges sharing an endpoint pair; true if any merged.
  bool parallel_pass() {
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (int i = 0; i < static_cast<int>(supers.size()); ++i) {
      if (!supers[i].alive) continue;
      auto key = std::minmax(supers[i].u, supers[i].v);
      buckets[{key.first, key.second}].push_back(i);
    }
    bool changed = false;
    for (auto& [key, group] : buckets) {
      if (group.size() < 2) continue;
      changed = true;
      int u = supers[group[0]].u, v = supers[group[0]].v;
      int acc = supers[group[0]].tree;
      for (size_t i = 1; i < group.size(); ++i) {
        int other = oriented(supers[group[i]], u);
        if (arena.nodes[acc].kind == SPKind::LEAF && arena.nodes[other].kind == SPKind::LEAF) {
          // two parallel-link bundles fuse into one leaf
          SPNode bundle = arena.nodes[acc];
          const auto& extra = arena.nodes[other].edges;
          bundle.edges.insert(bundle.edges.end(), extra.begin(), extra.end());
          arena.nodes.push_back(std::move(bundle));
        } else {
          SPNode node;
          node.kind = SPKind::PARALLEL;
          node.source = arena.nodes[acc].source;
          node.sink = arena.nodes[acc].sink;
          node.left = acc;
          node.right = other;
          arena.nodes.push_back(std::move(node));
        }
        acc = static_cast<int>(arena.nodes.size()) - 1;
      }
      for (int idx : group) retire(idx);
      add_super(u, v, acc);
    }
    return changed;
  }

  // Contracts internal degree-2 nodes (ascending node index); true if any.
  bool contract_pass(int source, int sink) {
    bool changed = false;
    for (int x = 0; x < g.node_count(); ++x) {
      if (x == source || x == sink) continue;
      if (inc[x].size() != 2) continue;
      int i1 = inc[x][0], i2 = inc[x][1];
      const Super& s1 = supers[i1];
      const Super& s2 = supers[i2];
      int a = s1.u == x ? s1.v : s1.u;
      int b = s2.u == x ? s2.v : s2.u;
      if (a == b) continue;  // would form a self-loop; parallel pass first
      SPNode node;
      node.kind = SPKind::SERIES;
      node.left = oriented(s1, a);
      node.right = oriented(s2, x);
      node.source = arena.nodes[node.left].source;
      node.sink = arena.nodes[node.right].sink;
      arena.nodes.push_back(std::move(node));
      retire(i1);
      retire(i2);
      add_super(a, b, static_cast<int>(arena.nodes.size()) - 1);
      changed = true;
    }
    return changed;
  }

  std::optional<SPTree> run(const NodeId& source, const NodeId& sink) {
    int s = g.node_index(source), t = g.node_index(sink);
    if (s == t) throw validation_error("recognition with source == sink");
    inc.assign(g.node_count(), {});
    for (int i = 0; i < static_cast<int>(supers.size()); ++i) {
      inc[supers[i].u].push_back(i);
      inc[supers[i].v].push_back(i);
    }
    bool changed = true;
    while (changed) {
      changed = parallel_pass();
      changed = contract_pass(s, t) || changed;
    }
    std::vector<int> live;
    for (int i = 0; i < static_cast<int>(supers.size()); ++i)
      if (supers[i].alive) live.push_back(i);
    if (live.size() != 1) return std::nullopt;
    const Super& last = supers[live[0]];
    if (std::minmax(last.u, last.v) != std::minmax(s, t)) return std::nullopt;
    arena.root = oriented(last, s);
    return normalize(arena);
  }
};

}  // namespace

std::optional<SPTree> recognize(const Multigraph& graph, const NodeId& source,
                                const NodeId& sink) {
  if (graph.edge_count() == 0) return std::nullopt;
  Recognizer rec(graph);
  return rec.run(source, sink);
}

// -- annotation -------------------------------------------------------------

const Rational& Annotation::cost_of(int node, PlayerId player) const {
  for (const auto& [pid, cost] : node_players.at(node))
    if (pid == player) return cost;
  throw internal_error("player " + std::to_string(player) + " does not traverse node " +
                       std::to_string(node));
}

namespace {

struct Annotator {
  const SPTree& tree;
  const Game& game;
  Annotation ann;
  std::vector<int> src_idx, snk_idx;     // per tree node, graph node indices
  std::vector<int> t_in, t_out;          // preorder intervals per tree node
  std::vector<int> edge_leaf;            // graph edge index -> leaf arena index
  std::vector<int> pos;                  // graph node -> position in current path
  std::vector<int> path_edges;           // current path, graph edge indices
  std::vector<int> path_nodes;           // current path, graph node indices
  PlayerId current = 0;
  int clock = 0;

  Annotator(const SPTree& t, const Game& g) : tree(t), game(g) {
    int n = tree.size();
    ann.node_players.resize(n);
    ann.cmax.assign(n, Rational(0));
    ann.edge_players.resize(game.graph().edge_count());
    src_idx.resize(n);
    snk_idx.resize(n);
    t_in.resize(n);
    t_out.resize(n);
    edge_leaf.assign(game.graph().edge_count(), -1);
    index_node(tree.root);
    pos.assign(game.graph().node_count(), -1);
  }

  void index_node(int idx) {
    const SPNode& n = tree.node(idx);
    src_idx[idx] = game.graph().node_index(n.source);
    snk_idx[idx] = game.graph().node_index(n.sink);
    t_in[idx] = clock++;
    if (n.kind == SPKind::LEAF) {
      for (const EdgeId& e : n.edges) {
        int ge = game.graph().edge_index(e);
        const Edge& edge = game.graph().edge(ge);
        auto tree_pair = std::minmax(n.source, n.sink);
        auto graph_pair = std::minmax(edge.u, edge.v);
        if (tree_pair != graph_pair)
          throw validation_error("edge '" + e + "' endpoints differ between tree and graph");
        edge_leaf[ge] = idx;
      }
    } else {
      index_node(n.left);
      index_node(n.right);
    }
    t_out[idx] = clock;
  }

  bool contains(int node, int other) const {
    return t_in[node] <= t_in[other] && t_in[other] < t_out[node];
  }

  Rational assign(int idx, int lo, int hi) {
    const SPNode& n = tree.node(idx);
    if (path_nodes[lo] != src_idx[idx] || path_nodes[hi] != snk_idx[idx])
      throw validation_error("player " + std::to_string(current) +
                             ": path enters a component against its orientation");
    Rational cost;
    if (n.kind == SPKind::LEAF) {
      if (hi != lo + 1 || edge_leaf[path_edges[lo]] != idx)
        throw validation_error("player " + std::to_string(current) +
                               ": path does not decompose over the tree");
      cost = game.cost(path_edges[lo], ann.loads[path_edges[lo]]);
      ann.edge_players[path_edges[lo]].push_back(current);
    } else if (n.kind == SPKind::SERIES) {
      int p = pos[snk_idx[n.left]];
      if (p <= lo || p >= hi)
        throw validation_error("player " + std::to_string(current) +
                               ": path skips a series midpoint");
      cost = assign(n.left, lo, p) + assign(n.right, p, hi);
    } else {
      int leaf = edge_leaf[path_edges[lo]];
      if (leaf == -1)
        throw validation_error("player " + std::to_string(current) +
                               ": path uses an edge outside the tree");
      int side = contains(n.left, leaf) ? n.left : n.right;
      cost = assign(side, lo, hi);
    }
    ann.node_players[idx].emplace_back(current, cost);
    if (cost > ann.cmax[idx]) ann.cmax[idx] = cost;
    return cost;
  }

  void add_player(const Player& p, const Path& path) {
    current = p.id;
    path_edges.clear();
    path_nodes.clear();
    int cur = game.graph().node_index(p.source);
    path_nodes.push_back(cur);
    pos[cur] = 0;
    for (const EdgeId& eid : path) {
      int e = game.graph().edge_index(eid);
      cur = game.graph().other_endpoint(e, cur);
      path_edges.push_back(e);
      path_nodes.push_back(cur);
      pos[cur] = static_cast<int>(path_nodes.size()) - 1;
    }
    assign(tree.root, 0, static_cast<int>(path_edges.size()));
    for (int node : path_nodes) pos[node] = -1;
  }
};

}  // namespace

Annotation annotate(const SPTree& tree, const Game& game, const State& state) {
  validate_tree(tree);
  auto terminals = game.symmetric_terminals();
  if (!terminals) throw not_symmetric("annotation requires a symmetric game");
  if (tree.node(tree.root).source != terminals->first ||
      tree.node(tree.root).sink != terminals->second)
    throw validation_error("tree orientation does not match the players' terminals");

  Annotator worker(tree, game);
  // Edge sets must coincide: every graph edge sits in exactly one leaf.
  for (int e = 0; e < game.graph().edge_count(); ++e)
    if (worker.edge_leaf[e] == -1)
      throw validation_error("edge '" + game.graph().edge(e).id + "' missing from the tree");

  worker.ann.loads = edge_loads(game, state);
  for (const Player& p : game.players()) worker.add_player(p, state.path(p.id));
  return std::move(worker.ann);
}

}  // namespace mintb
