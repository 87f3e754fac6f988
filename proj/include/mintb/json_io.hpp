#pragma once

#include <string>

#include "json.hpp"
#include "mintb/game.hpp"

namespace mintb {

/// JSON layer.  All rationals are emitted as canonical strings ("p" or "p/q");
/// on input, plain JSON integers are accepted as well.  Floats are rejected
/// everywhere.  Serialization is canonical: alphabetically sorted keys,
/// 2-space indent, trailing newline — byte-stable for fixtures and diffs.

Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& r);

/// Graph document: {"nodes":[...], "edges":[{"id","u","v", ...}]}.  A "cost"
/// field on edges is permitted and ignored, so game files double as graphs.
Multigraph graph_from_json(const nlohmann::json& j);

/// Game document: graph fields plus per-edge "cost" arrays (length = number
/// of players + 1) and a "players" list.
Game game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const Game& game);

/// State document: {"<player id>": [edge ids in path order]}.
State state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const State& state);

/// Toll document: {"<edge id>": "p/q"}, support only.
TollVector tolls_from_json(const nlohmann::json& j);
nlohmann::json tolls_to_json(const TollVector& tolls);

std::string dump_canonical(const nlohmann::json& j);
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mintb
