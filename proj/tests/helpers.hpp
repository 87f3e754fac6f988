#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mintb/game.hpp"
#include "mintb/json_io.hpp"

namespace mintb::testing {

inline std::string data_path(const std::string& name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

inline Game load_game(const std::string& name) {
  return game_from_json(load_json_file(data_path(name)));
}

inline State load_state(const std::string& name) {
  return state_from_json(load_json_file(data_path(name)));
}

inline TollVector load_tolls(const std::string& name) {
  return tolls_from_json(load_json_file(data_path(name)));
}

inline std::string read_text(const std::string& name) {
  std::ifstream in(data_path(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace mintb::testing
