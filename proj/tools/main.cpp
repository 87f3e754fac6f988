#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mintb/errors.hpp"
#include "mintb/json_io.hpp"
#include "mintb/oracle.hpp"
#include "mintb/random_instances.hpp"
#include "mintb/reduction.hpp"
#include "mintb/solver.hpp"
#include "mintb/sp_tree.hpp"

namespace {

using namespace mintb;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
  if (out_path)
    write_text_file(*out_path, content);
  else
    std::cout << content;
}

Stage parse_stage(const std::string& name) {
  auto stage = stage_from_name(name);
  if (!stage) throw validation_error("unknown stage \"" + name + "\" (expected g1, g2, or g3)");
  return *stage;
}

GadgetGame load_gadget(const std::string& cnf_path, const std::string& stage_name) {
  return build_game(parse_dimacs(read_text_file(cnf_path)), parse_stage(stage_name));
}

long long elapsed_ms(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               from)
      .count();
}

void print_lists(const SolveDebug& debug) {
  std::cerr << "term: " << to_term(debug.tree) << "\n";
  for (int i = 0; i < debug.tree.size(); ++i) {
    const SPNode& node = debug.tree.node(i);
    const char* kind = node.kind == SPKind::LEAF     ? "leaf"
                       : node.kind == SPKind::SERIES ? "series"
                                                     : "parallel";
    std::cerr << "node " << i << " " << kind << " " << node.source << "->" << node.sink
              << ": lambda0=" << debug.lists[i].lambda0.str();
    for (const TollabilityEntry& e : debug.lists[i].entries)
      std::cerr << " (" << e.eta << "," << e.lambda.str() << ")";
    std::cerr << "\n";
  }
}

int cmd_solve_sp(const std::string& game_path, const std::string& state_path,
                 const std::optional<std::string>& out_path, bool debug_lists) {
  Game game = game_from_json(load_json_file(game_path));
  State state = state_from_json(load_json_file(state_path));
  SolveDebug debug;
  SolveResult result = solve(game, state, debug_lists ? &debug : nullptr);
  if (debug_lists) print_lists(debug);
  emit(out_path, dump_canonical(tolls_to_json(result.tolls)));
  std::cerr << "tolled edges: " << result.tolled_edges << "\n";
  std::cerr << "entry floor: " << result.entry_floor.str() << "\n";
  return 0;
}

int cmd_check(const std::string& game_path, const std::string& state_path,
              const std::optional<std::string>& tolls_path) {
  Game game = game_from_json(load_json_file(game_path));
  State state = state_from_json(load_json_file(state_path));
  TollVector tolls;
  if (tolls_path) tolls = tolls_from_json(load_json_file(*tolls_path));
  validate_state(game, state);
  validate_tolls(game, tolls);
  PneVerdict verdict = is_pne(game, tolls, state);
  if (verdict.pne) {
    std::cout << "PNE: yes\n";
    return 0;
  }
  std::cout << "PNE: no\n";
  std::cout << "player " << verdict.player << " pays " << verdict.current_cost.str()
            << " but could pay " << verdict.improved_cost.str() << " via";
  for (const EdgeId& e : verdict.improving_path) std::cout << " " << e;
  std::cout << "\n";
  return 1;
}

int cmd_oracle_opt(const std::string& game_path, const std::optional<std::string>& out_path,
                   long max_nodes) {
  Game game = game_from_json(load_json_file(game_path));
  OracleBudgets budgets;
  budgets.max_bb_nodes = max_nodes;
  OptimumResult result = social_optimum(game, std::nullopt, budgets);
  nlohmann::json j;
  j["cost"] = rational_to_json(result.cost);
  j["state"] = state_to_json(result.state);
  j["nodes"] = result.nodes;
  j["budget_exhausted"] = result.budget_exhausted;
  emit(out_path, dump_canonical(j));
  return result.budget_exhausted ? 3 : 0;
}

int cmd_oracle_mintb(const std::string& game_path, const std::string& state_path,
                     const std::optional<std::string>& out_path, int max_subset, long max_paths) {
  Game game = game_from_json(load_json_file(game_path));
  State state = state_from_json(load_json_file(state_path));
  OracleBudgets budgets;
  budgets.max_subset_size = max_subset;
  budgets.max_paths = max_paths;
  MintbResult result = min_tollbooths(game, state, budgets);
  nlohmann::json j;
  j["count"] = result.count;
  j["tolls"] = tolls_to_json(result.tolls);
  emit(out_path, dump_canonical(j));
  return 0;
}

int cmd_recognize(const std::string& graph_path, std::optional<std::string> source,
                  std::optional<std::string> sink) {
  nlohmann::json doc = load_json_file(graph_path);
  Multigraph graph = graph_from_json(doc);
  if (!source != !sink) throw validation_error("--source and --sink go together");
  if (!source) {
    Game game = game_from_json(doc);
    auto terminals = game.symmetric_terminals();
    if (!terminals)
      throw validation_error("game is not symmetric; pass --source and --sink explicitly");
    source = terminals->first;
    sink = terminals->second;
  }
  auto tree = recognize(graph, *source, *sink);
  if (!tree) {
    std::cerr << "not series-parallel between " << *source << " and " << *sink << "\n";
    return 1;
  }
  std::cout << to_term(*tree) << "\n";
  return 0;
}

int cmd_reduce(const std::string& cnf_path, const std::string& stage,
               const std::optional<std::string>& out_path,
               const std::optional<std::string>& roles_path) {
  GadgetGame gadget = load_gadget(cnf_path, stage);
  emit(out_path, dump_canonical(game_to_json(gadget.game)));
  if (roles_path) {
    nlohmann::json roles;
    roles["node_roles"] = nlohmann::json::object();
    for (const auto& [node, role] : gadget.node_roles) roles["node_roles"][node] = role;
    roles["player_roles"] = nlohmann::json::object();
    for (const auto& [player, role] : gadget.player_roles)
      roles["player_roles"][std::to_string(player)] = role;
    write_text_file(*roles_path, dump_canonical(roles));
  }
  std::cerr << "stage " << stage_name(gadget.stage) << ": "
            << gadget.game.graph().node_count() << " nodes, " << gadget.game.graph().edge_count()
            << " edges, " << gadget.game.player_count() << " players\n";
  return 0;
}

int cmd_intended_state(const std::string& cnf_path, const std::string& stage,
                       const std::string& assignment_text,
                       const std::optional<std::string>& out_path) {
  GadgetGame gadget = load_gadget(cnf_path, stage);
  Assignment assignment = parse_assignment(assignment_text, gadget.formula.num_vars);
  State state = build_intended_state(gadget, assignment);
  emit(out_path, dump_canonical(state_to_json(state)));
  return 0;
}

int cmd_extract(const std::string& cnf_path, const std::string& stage,
                const std::string& tolls_path) {
  GadgetGame gadget = load_gadget(cnf_path, stage);
  TollVector tolls = tolls_from_json(load_json_file(tolls_path));
  std::cout << extract_assignment(gadget, tolls).str() << "\n";
  return 0;
}

int cmd_verify_reduction(const std::string& cnf_path, const std::string& stage,
                         const std::optional<std::string>& state_path, bool use_social_opt,
                         int max_subset, long max_nodes) {
  GadgetGame gadget = load_gadget(cnf_path, stage);
  State state;
  if (state_path && use_social_opt)
    throw validation_error("--state and --use-social-opt are mutually exclusive");
  if (state_path) {
    state = state_from_json(load_json_file(*state_path));
  } else if (use_social_opt) {
    OracleBudgets budgets;
    budgets.max_bb_nodes = max_nodes;
    OptimumResult opt = social_optimum(gadget.game, std::nullopt, budgets);
    if (opt.budget_exhausted)
      throw budget_error("social optimum search ran out of nodes; raise --max-nodes");
    state = opt.state;
  } else {
    auto best = min_weight_sat(gadget.formula);
    if (!best)
      throw validation_error(
          "formula is unsatisfiable; supply --state or --use-social-opt instead");
    state = build_intended_state(gadget, *best);
  }

  OracleBudgets budgets;
  budgets.max_subset_size = max_subset;
  PropertyReport report = verify_properties(gadget, state, budgets);
  auto line = [](const char* name, bool ok) {
    std::cout << name << ": " << (ok ? "PASS" : "FAIL") << "\n";
  };
  std::cout << "stage: " << stage_name(gadget.stage) << "\n";
  line("property I (clause coverage)", report.clause_coverage);
  line("property II (polarity consistency)", report.polarity_consistency);
  line("property III (toll lower bound)", report.toll_lower_bound);
  line("property IV (extraction satisfies)", report.extraction_satisfies);
  std::cout << "tollbooth minimum: " << report.mintb_count << "\n";
  if (report.min_sat_weight >= 0)
    std::cout << "minimum satisfying weight: " << report.min_sat_weight << "\n";
  std::cout << "extracted assignment: " << report.extracted.str() << "\n";
  for (const std::string& note : report.notes) std::cout << "note: " << note << "\n";
  return report.all_hold() ? 0 : 1;
}

int cmd_bench(const std::string& sizes_text, int players, int max_cost, unsigned long seed,
              const std::optional<std::string>& out_path) {
  std::vector<int> sizes;
  std::istringstream in(sizes_text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      sizes.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw validation_error("bad size \"" + token + "\" in --sizes");
    }
    if (sizes.back() < 1) throw validation_error("sizes must be positive");
  }
  if (sizes.empty()) throw validation_error("--sizes is empty");

  std::ostringstream csv;
  csv << "m,n_players,build_ms,solve_ms,tolled_edges\n";
  Rng rng(seed);
  for (int m : sizes) {
    auto t0 = std::chrono::steady_clock::now();
    RandomSpGame instance = random_sp_game(rng, m, players, max_cost);
    State state = random_sp_state(rng, instance.tree, instance.game);
    long long build_ms = elapsed_ms(t0);

    auto t1 = std::chrono::steady_clock::now();
    SolveResult result = solve(instance.game, state);
    long long solve_ms = elapsed_ms(t1);

    csv << m << "," << players << "," << build_ms << "," << solve_ms << ","
        << result.tolled_edges << "\n";
    std::cerr << "m=" << m << " solved in " << solve_ms << " ms, " << result.tolled_edges
              << " tolled edges\n";
  }
  emit(out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"series-parallel tollbooth solver and congestion-game toolbox"};
  app.require_subcommand(1);
  std::function<int()> run;

  // solve-sp
  {
    auto* cmd = app.add_subcommand("solve-sp",
                                   "minimum tollbooths implementing a state on a "
                                   "series-parallel symmetric game");
    auto game = std::make_shared<std::string>();
    auto state = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto debug = std::make_shared<bool>(false);
    cmd->add_option("--game", *game, "game JSON")->required();
    cmd->add_option("--state", *state, "state JSON")->required();
    cmd->add_option("--out", *out, "write tolls JSON here instead of stdout");
    cmd->add_flag("--debug-lists", *debug, "dump per-node tollability lists to stderr");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_solve_sp(*game, *state,
                            out->empty() ? std::nullopt : std::make_optional(*out), *debug);
      };
    });
  }

  // check
  {
    auto* cmd = app.add_subcommand("check", "is the state a pure Nash equilibrium under tolls?");
    auto game = std::make_shared<std::string>();
    auto state = std::make_shared<std::string>();
    auto tolls = std::make_shared<std::string>();
    cmd->add_option("--game", *game, "game JSON")->required();
    cmd->add_option("--state", *state, "state JSON")->required();
    cmd->add_option("--tolls", *tolls, "tolls JSON (default: none)");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_check(*game, *state,
                         tolls->empty() ? std::nullopt : std::make_optional(*tolls));
      };
    });
  }

  // oracle-opt
  {
    auto* cmd = app.add_subcommand("oracle-opt", "exhaustive social optimum (branch and bound)");
    auto game = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto max_nodes = std::make_shared<long>(5'000'000);
    cmd->add_option("--game", *game, "game JSON")->required();
    cmd->add_option("--out", *out, "write result JSON here instead of stdout");
    cmd->add_option("--max-nodes", *max_nodes, "search-node budget");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_oracle_opt(*game, out->empty() ? std::nullopt : std::make_optional(*out),
                              *max_nodes);
      };
    });
  }

  // oracle-mintb
  {
    auto* cmd = app.add_subcommand("oracle-mintb",
                                   "exact minimum tollbooths by subset enumeration");
    auto game = std::make_shared<std::string>();
    auto state = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto max_subset = std::make_shared<int>(9);
    auto max_paths = std::make_shared<long>(200'000);
    cmd->add_option("--game", *game, "game JSON")->required();
    cmd->add_option("--state", *state, "state JSON")->required();
    cmd->add_option("--out", *out, "write result JSON here instead of stdout");
    cmd->add_option("--max-subset", *max_subset, "largest toll-support size tried");
    cmd->add_option("--max-paths", *max_paths, "per-player path enumeration cap");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_oracle_mintb(*game, *state,
                                out->empty() ? std::nullopt : std::make_optional(*out),
                                *max_subset, *max_paths);
      };
    });
  }

  // recognize
  {
    auto* cmd = app.add_subcommand("recognize",
                                   "series-parallel recognition; prints the parse term");
    auto graph = std::make_shared<std::string>();
    auto source = std::make_shared<std::string>();
    auto sink = std::make_shared<std::string>();
    cmd->add_option("--graph", *graph, "graph or game JSON")->required();
    cmd->add_option("--source", *source, "terminal (default: symmetric game source)");
    cmd->add_option("--sink", *sink, "terminal (default: symmetric game sink)");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_recognize(*graph,
                             source->empty() ? std::nullopt : std::make_optional(*source),
                             sink->empty() ? std::nullopt : std::make_optional(*sink));
      };
    });
  }

  // reduce
  {
    auto* cmd = app.add_subcommand("reduce", "build the gadget game of a CNF formula");
    auto cnf = std::make_shared<std::string>();
    auto stage = std::make_shared<std::string>("g3");
    auto out = std::make_shared<std::string>();
    auto roles = std::make_shared<std::string>();
    cmd->add_option("--cnf", *cnf, "DIMACS CNF file")->required();
    cmd->add_option("--stage", *stage, "g1, g2, or g3 (default g3)");
    cmd->add_option("--out", *out, "write game JSON here instead of stdout");
    cmd->add_option("--roles", *roles, "also write node/player role metadata JSON here");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_reduce(*cnf, *stage, out->empty() ? std::nullopt : std::make_optional(*out),
                          roles->empty() ? std::nullopt : std::make_optional(*roles));
      };
    });
  }

  // intended-state
  {
    auto* cmd = app.add_subcommand("intended-state",
                                   "intended profile of a satisfying assignment");
    auto cnf = std::make_shared<std::string>();
    auto stage = std::make_shared<std::string>("g3");
    auto assignment = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--cnf", *cnf, "DIMACS CNF file")->required();
    cmd->add_option("--stage", *stage, "g1, g2, or g3 (default g3)");
    cmd->add_option("--assignment", *assignment, "bitstring, one digit per variable")->required();
    cmd->add_option("--out", *out, "write state JSON here instead of stdout");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_intended_state(*cnf, *stage, *assignment,
                                  out->empty() ? std::nullopt : std::make_optional(*out));
      };
    });
  }

  // extract
  {
    auto* cmd = app.add_subcommand("extract", "read the assignment off a toll vector");
    auto cnf = std::make_shared<std::string>();
    auto stage = std::make_shared<std::string>("g3");
    auto tolls = std::make_shared<std::string>();
    cmd->add_option("--cnf", *cnf, "DIMACS CNF file")->required();
    cmd->add_option("--stage", *stage, "g1, g2, or g3 (default g3)");
    cmd->add_option("--tolls", *tolls, "tolls JSON")->required();
    cmd->callback([=, &run] { run = [=] { return cmd_extract(*cnf, *stage, *tolls); }; });
  }

  // verify-reduction
  {
    auto* cmd = app.add_subcommand("verify-reduction",
                                   "check the construction properties on a state");
    auto cnf = std::make_shared<std::string>();
    auto stage = std::make_shared<std::string>("g3");
    auto state = std::make_shared<std::string>();
    auto social = std::make_shared<bool>(false);
    auto max_subset = std::make_shared<int>(9);
    auto max_nodes = std::make_shared<long>(5'000'000);
    cmd->add_option("--cnf", *cnf, "DIMACS CNF file")->required();
    cmd->add_option("--stage", *stage, "g1, g2, or g3 (default g3)");
    cmd->add_option("--state", *state,
                    "state JSON (default: intended profile of a minimum-weight assignment)");
    cmd->add_flag("--use-social-opt", *social, "verify against a computed social optimum");
    cmd->add_option("--max-subset", *max_subset, "largest toll-support size tried");
    cmd->add_option("--max-nodes", *max_nodes, "social-optimum search budget");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_verify_reduction(*cnf, *stage,
                                    state->empty() ? std::nullopt : std::make_optional(*state),
                                    *social, *max_subset, *max_nodes);
      };
    });
  }

  // bench
  {
    auto* cmd = app.add_subcommand("bench", "solve runtime on random series-parallel instances");
    auto sizes = std::make_shared<std::string>("250,500,1000,2000,4000");
    auto players = std::make_shared<int>(3);
    auto max_cost = std::make_shared<int>(100);
    auto seed = std::make_shared<unsigned long>(1);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--sizes", *sizes, "comma-separated edge counts");
    cmd->add_option("--players", *players, "players per instance");
    cmd->add_option("--max-cost", *max_cost, "cost table entries drawn from [0, max]");
    cmd->add_option("--seed", *seed, "generator seed");
    cmd->add_option("--out", *out, "write CSV here instead of stdout");
    cmd->callback([=, &run] {
      run = [=] {
        return cmd_bench(*sizes, *players, *max_cost, *seed,
                         out->empty() ? std::nullopt : std::make_optional(*out));
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    return run();
  } catch (const budget_error& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
