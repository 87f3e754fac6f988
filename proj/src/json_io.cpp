#include "mintb/json_io.hpp"

#include <fstream>
#include <sstream>

#include "mintb/errors.hpp"

namespace mintb {

using nlohmann::json;

namespace {

const json& expect(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw parse_error(std::string(what) + ": missing key \"" + key + "\"");
  return *it;
}

std::string expect_string(const json& j, const char* what) {
  if (!j.is_string()) throw parse_error(std::string(what) + ": expected a string");
  return j.get<std::string>();
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  if (j.is_number_float()) throw parse_error("floating-point numbers are not accepted; use \"p/q\"");
  throw parse_error("expected an integer or a \"p/q\" string, got " + j.dump());
}

json rational_to_json(const Rational& r) { return r.str(); }

namespace {

std::pair<std::vector<NodeId>, std::vector<Edge>> graph_parts(const json& j) {
  const json& nodes_j = expect(j, "nodes", "graph");
  const json& edges_j = expect(j, "edges", "graph");
  if (!nodes_j.is_array() || !edges_j.is_array())
    throw parse_error("graph: \"nodes\" and \"edges\" must be arrays");
  std::vector<NodeId> nodes;
  for (const json& n : nodes_j) nodes.push_back(expect_string(n, "graph node"));
  std::vector<Edge> edges;
  for (const json& e : edges_j) {
    if (!e.is_object()) throw parse_error("graph: each edge must be an object");
    edges.push_back({expect_string(expect(e, "id", "edge"), "edge id"),
                     expect_string(expect(e, "u", "edge"), "edge endpoint"),
                     expect_string(expect(e, "v", "edge"), "edge endpoint")});
  }
  return {std::move(nodes), std::move(edges)};
}

}  // namespace

Multigraph graph_from_json(const json& j) {
  auto [nodes, edges] = graph_parts(j);
  return Multigraph(std::move(nodes), std::move(edges));
}

Game game_from_json(const json& j) {
  auto [nodes, edges] = graph_parts(j);
  const json& edges_j = j.at("edges");
  std::vector<std::vector<Rational>> tables;
  for (const json& e : edges_j) {
    const json& cost = expect(e, "cost", "edge");
    if (!cost.is_array()) throw parse_error("edge \"cost\" must be an array");
    std::vector<Rational> table;
    for (const json& c : cost) table.push_back(rational_from_json(c));
    tables.push_back(std::move(table));
  }
  const json& players_j = expect(j, "players", "game");
  if (!players_j.is_array()) throw parse_error("game: \"players\" must be an array");
  std::vector<Player> players;
  for (const json& p : players_j) {
    if (!p.is_object()) throw parse_error("game: each player must be an object");
    const json& id = expect(p, "id", "player");
    if (!id.is_number_integer()) throw parse_error("player \"id\" must be an integer");
    players.push_back({id.get<int>(),
                       expect_string(expect(p, "source", "player"), "player source"),
                       expect_string(expect(p, "sink", "player"), "player sink")});
  }
  return Game(Multigraph(std::move(nodes), std::move(edges)), std::move(players),
              std::move(tables));
}

json game_to_json(const Game& game) {
  json j;
  j["nodes"] = json::array();
  for (const NodeId& n : game.graph().nodes()) j["nodes"].push_back(n);
  j["edges"] = json::array();
  for (int e = 0; e < game.graph().edge_count(); ++e) {
    const Edge& edge = game.graph().edge(e);
    json ej;
    ej["id"] = edge.id;
    ej["u"] = edge.u;
    ej["v"] = edge.v;
    ej["cost"] = json::array();
    for (const Rational& c : game.cost_table(e)) ej["cost"].push_back(rational_to_json(c));
    j["edges"].push_back(std::move(ej));
  }
  j["players"] = json::array();
  for (const Player& p : game.players()) {
    json pj;
    pj["id"] = p.id;
    pj["source"] = p.source;
    pj["sink"] = p.sink;
    j["players"].push_back(std::move(pj));
  }
  return j;
}

State state_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("state: expected an object keyed by player id");
  std::map<PlayerId, Path> paths;
  for (const auto& [key, value] : j.items()) {
    PlayerId id;
    try {
      size_t pos = 0;
      id = std::stoi(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw parse_error("state: key \"" + key + "\" is not a player id");
    }
    if (!value.is_array()) throw parse_error("state: path for player " + key + " must be an array");
    Path path;
    for (const json& e : value) path.push_back(expect_string(e, "state edge"));
    if (!paths.emplace(id, std::move(path)).second)
      throw parse_error("state: duplicate player id " + key);
  }
  return State(std::move(paths));
}

json state_to_json(const State& state) {
  json j = json::object();
  for (const auto& [id, path] : state.paths()) {
    json pj = json::array();
    for (const EdgeId& e : path) pj.push_back(e);
    j[std::to_string(id)] = std::move(pj);
  }
  return j;
}

TollVector tolls_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("tolls: expected an object keyed by edge id");
  std::map<EdgeId, Rational> tolls;
  for (const auto& [key, value] : j.items()) tolls.emplace(key, rational_from_json(value));
  return TollVector(std::move(tolls));
}

json tolls_to_json(const TollVector& tolls) {
  json j = json::object();
  for (const auto& [id, value] : tolls.entries()) j[id] = rational_to_json(value);
  return j;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw parse_error("malformed JSON");
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json_text(buf.str());
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  out << content;
}

}  // namespace mintb
