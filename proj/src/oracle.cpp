#include "mintb/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mintb/errors.hpp"

namespace mintb {

// -- path enumeration -------------------------------------------------------

namespace {

struct PathEnum {
  const Game& game;
  const std::optional<Rational>& cap;
  long max_paths;
  std::vector<Path> out;
  std::vector<char> visited;
  Path current;
  Rational optimistic;  // sum of c(1) along current
  int sink;

  PathEnum(const Game& g, const std::optional<Rational>& c, long mp)
      : game(g), cap(c), max_paths(mp), visited(g.graph().node_count(), 0) {}

  void dfs(int x) {
    if (x == sink) {
      if (static_cast<long>(out.size()) >= max_paths)
        throw budget_error("path enumeration exceeded " + std::to_string(max_paths) + " paths");
      out.push_back(current);
      return;
    }
    visited[x] = 1;
    for (const auto& arc : game.graph().adjacency(x)) {
      if (visited[arc.to]) continue;
      const Rational& step = game.cost(arc.edge, 1);
      if (cap && optimistic + step > *cap) continue;
      optimistic += step;
      current.push_back(game.graph().edge(arc.edge).id);
      dfs(arc.to);
      current.pop_back();
      optimistic -= step;
    }
    visited[x] = 0;
  }
};

}  // namespace

std::vector<Path> enum_paths(const Game& game, PlayerId player,
                             const std::optional<Rational>& cost_cap, long max_paths) {
  const Player& p = game.player(player);
  PathEnum walker(game, cost_cap, max_paths);
  walker.sink = game.graph().node_index(p.sink);
  walker.dfs(game.graph().node_index(p.source));
  return std::move(walker.out);
}

// -- social optimum ---------------------------------------------------------

namespace {

struct Optimizer {
  const Game& game;
  const OracleBudgets& budgets;
  std::vector<PlayerId> order;                  // ascending player ids
  std::vector<std::vector<Path>> choices;       // per order position
  std::vector<std::vector<std::vector<int>>> choice_edges;  // edge indices
  std::vector<Rational> suffix_floor;           // optimistic cost of players >= d
  std::vector<int> loads;
  std::vector<int> picked;
  std::optional<Rational> best_cost;
  std::vector<int> best_picked;
  long nodes = 0;
  bool exhausted = false;

  Optimizer(const Game& g, const OracleBudgets& b) : game(g), budgets(b) {
    for (const Player& p : g.players()) order.push_back(p.id);
    std::sort(order.begin(), order.end());
    for (PlayerId id : order) {
      choices.push_back(enum_paths(g, id, std::nullopt, b.max_paths));
      choice_edges.emplace_back();
      for (const Path& path : choices.back()) {
        std::vector<int> idxs;
        for (const EdgeId& e : path) idxs.push_back(g.graph().edge_index(e));
        choice_edges.back().push_back(std::move(idxs));
      }
    }
    // Cheapest conceivable cost per player: every edge at load 1.
    suffix_floor.assign(order.size() + 1, Rational(0));
    for (int d = static_cast<int>(order.size()) - 1; d >= 0; --d) {
      std::optional<Rational> floor;
      for (const auto& idxs : choice_edges[d]) {
        Rational c;
        for (int e : idxs) c += game.cost(e, 1);
        if (!floor || c < *floor) floor = c;
      }
      suffix_floor[d] = suffix_floor[d + 1] + *floor;
    }
    loads.assign(g.graph().edge_count(), 0);
    picked.assign(order.size(), -1);
  }

  void search(size_t d, const Rational& partial) {
    if (exhausted) return;
    if (++nodes > budgets.max_bb_nodes) {
      exhausted = true;
      return;
    }
    if (d == order.size()) {
      // Pruning is >=, so reaching a full profile means a strict improvement.
      best_cost = partial;
      best_picked = picked;
      return;
    }
    for (size_t c = 0; c < choice_edges[d].size(); ++c) {
      Rational next = partial;
      for (int e : choice_edges[d][c]) {
        next += game.cost(e, loads[e] + 1) * Rational(loads[e] + 1) -
                game.cost(e, std::max(loads[e], 1)) * Rational(loads[e]);
        ++loads[e];
      }
      if (!best_cost || next + suffix_floor[d + 1] < *best_cost) {
        picked[d] = static_cast<int>(c);
        search(d + 1, next);
      }
      for (int e : choice_edges[d][c]) --loads[e];
      if (exhausted) return;
    }
  }
};

}  // namespace

OptimumResult social_optimum(const Game& game, const std::optional<State>& incumbent,
                             const OracleBudgets& budgets) {
  Optimizer opt(game, budgets);
  std::optional<State> seed = incumbent;
  if (seed) {
    validate_state(game, *seed);
    opt.best_cost = social_cost(game, *seed);
  }
  opt.search(0, Rational(0));

  OptimumResult result;
  result.nodes = opt.nodes;
  result.budget_exhausted = opt.exhausted;
  if (!opt.best_picked.empty()) {
    State state;
    for (size_t d = 0; d < opt.order.size(); ++d)
      state.set_path(opt.order[d], opt.choices[d][opt.best_picked[d]]);
    result.state = std::move(state);
    result.cost = *opt.best_cost;
  } else if (seed) {
    result.state = *seed;
    result.cost = *opt.best_cost;
  } else if (opt.exhausted) {
    throw budget_error("social optimum search exhausted its node budget before any state");
  } else {
    throw internal_error("social optimum search ended with no state");
  }
  return result;
}

// -- toll feasibility (exact elimination) -----------------------------------

namespace {

// One inequality sum(coeff_i * x_i) <= rhs over a fixed variable vector.
struct LinRow {
  std::vector<long long> coeff;
  Rational rhs;
};

void dedup_rows(std::vector<LinRow>& rows) {
  std::map<std::vector<long long>, Rational> tightest;
  for (LinRow& r : rows) {
    auto it = tightest.find(r.coeff);
    if (it == tightest.end())
      tightest.emplace(std::move(r.coeff), std::move(r.rhs));
    else if (r.rhs < it->second)
      it->second = std::move(r.rhs);
  }
  rows.clear();
  for (auto& [coeff, rhs] : tightest) rows.push_back({coeff, rhs});
}

// Eliminates variable `v`, returning the projected system.
std::vector<LinRow> fm_eliminate(const std::vector<LinRow>& rows, size_t v, long max_rows) {
  std::vector<const LinRow*> pos, neg;
  std::vector<LinRow> out;
  for (const LinRow& r : rows) {
    if (r.coeff[v] > 0)
      pos.push_back(&r);
    else if (r.coeff[v] < 0)
      neg.push_back(&r);
    else
      out.push_back(r);
  }
  long produced = static_cast<long>(out.size()) +
                  static_cast<long>(pos.size()) * static_cast<long>(neg.size());
  if (produced > max_rows)
    throw budget_error("elimination would grow to " + std::to_string(produced) +
                       " inequalities (cap " + std::to_string(max_rows) + ")");
  for (const LinRow* p : pos) {
    for (const LinRow* n : neg) {
      long long a = p->coeff[v], b = -n->coeff[v];
      LinRow combined;
      combined.coeff.resize(p->coeff.size());
      for (size_t i = 0; i < combined.coeff.size(); ++i)
        combined.coeff[i] = b * p->coeff[i] + a * n->coeff[i];
      combined.rhs = Rational(b) * p->rhs + Rational(a) * n->rhs;
      out.push_back(std::move(combined));
    }
  }
  dedup_rows(out);
  return out;
}

bool fm_feasible(std::vector<LinRow> rows, size_t vars, long max_rows) {
  for (size_t v = 0; v < vars; ++v) rows = fm_eliminate(rows, v, max_rows);
  for (const LinRow& r : rows)
    if (r.rhs.is_negative()) return false;
  return true;
}

// Feasible point minimizing the variable total: an auxiliary variable pinned
// to the sum is minimized first, then each variable takes its lowest feasible
// value during back-substitution.
std::vector<Rational> fm_min_total(const std::vector<LinRow>& base, size_t vars, long max_rows) {
  // Variable layout: x_0..x_{vars-1}, then z at index `vars` with z == sum(x).
  std::vector<LinRow> rows;
  for (const LinRow& r : base) {
    LinRow wide;
    wide.coeff = r.coeff;
    wide.coeff.push_back(0);
    wide.rhs = r.rhs;
    rows.push_back(std::move(wide));
  }
  LinRow sum_le_z, z_le_sum;
  sum_le_z.coeff.assign(vars + 1, 1);
  sum_le_z.coeff[vars] = -1;
  z_le_sum.coeff.assign(vars + 1, -1);
  z_le_sum.coeff[vars] = 1;
  rows.push_back(std::move(sum_le_z));
  rows.push_back(std::move(z_le_sum));

  std::vector<std::vector<LinRow>> snapshots;
  for (size_t v = 0; v < vars; ++v) {
    snapshots.push_back(rows);
    rows = fm_eliminate(rows, v, max_rows);
  }
  // Only z is left; its smallest feasible value is the minimum toll total.
  std::optional<Rational> z_low;
  for (const LinRow& r : rows) {
    long long a = r.coeff[vars];
    if (a == 0) {
      if (r.rhs.is_negative()) throw internal_error("infeasible system reached fm_min_total");
      continue;
    }
    Rational bound = r.rhs / Rational(a);
    if (a < 0 && (!z_low || bound > *z_low)) z_low = bound;
  }
  if (!z_low) throw internal_error("toll total is unbounded below");

  std::vector<Rational> value(vars + 1);
  value[vars] = *z_low;
  for (size_t v = vars; v-- > 0;) {
    std::optional<Rational> low, high;
    for (const LinRow& r : snapshots[v]) {
      if (r.coeff[v] == 0) continue;
      Rational rest = r.rhs;
      for (size_t j = v + 1; j < r.coeff.size(); ++j)
        rest -= Rational(r.coeff[j]) * value[j];
      Rational bound = rest / Rational(r.coeff[v]);
      if (r.coeff[v] > 0) {
        if (!high || bound < *high) high = bound;
      } else {
        if (!low || bound > *low) low = bound;
      }
    }
    if (!low) throw internal_error("variable without a lower bound in back-substitution");
    if (high && *low > *high) throw internal_error("back-substitution interval empty");
    value[v] = *low;
  }
  value.pop_back();
  return value;
}

// Deviation inequalities with one coefficient slot per edge of the game.
// Tolling decisions later restrict these to a subset of edges.
struct DeviationSystem {
  std::vector<std::pair<std::vector<int>, Rational>> rows;  // coeff per edge index

  DeviationSystem(const Game& game, const State& state, long max_paths) {
    std::vector<int> loads = edge_loads(game, state);
    int m = game.graph().edge_count();
    std::map<std::vector<int>, Rational> tightest;
    for (const Player& p : game.players()) {
      const Path& own = state.path(p.id);
      std::set<EdgeId> own_set(own.begin(), own.end());
      Rational cur;
      for (const EdgeId& e : own) cur += game.cost(game.graph().edge_index(e), loads[game.graph().edge_index(e)]);
      for (const Path& alt : enum_paths(game, p.id, std::nullopt, max_paths)) {
        std::set<EdgeId> alt_set(alt.begin(), alt.end());
        if (alt_set == own_set) continue;
        Rational dev;
        std::vector<int> coeff(m, 0);
        for (const EdgeId& e : alt) {
          int idx = game.graph().edge_index(e);
          dev += game.cost(idx, own_set.count(e) ? loads[idx] : loads[idx] + 1);
          if (!own_set.count(e)) coeff[idx] = -1;
        }
        for (const EdgeId& e : own)
          if (!alt_set.count(e)) coeff[game.graph().edge_index(e)] = 1;
        Rational rhs = dev - cur;
        auto it = tightest.find(coeff);
        if (it == tightest.end())
          tightest.emplace(std::move(coeff), std::move(rhs));
        else if (rhs < it->second)
          it->second = std::move(rhs);
      }
    }
    for (auto& [coeff, rhs] : tightest) rows.push_back({coeff, rhs});
  }

  // Projects onto tolling only `subset` (edge indices): other tolls are 0.
  // Returns nullopt when a deviation is strictly profitable regardless of
  // the subset's toll values.
  std::optional<std::vector<LinRow>> restrict_to(const std::vector<int>& subset) const {
    std::vector<LinRow> out;
    for (const auto& [coeff, rhs] : rows) {
      LinRow r;
      r.coeff.reserve(subset.size());
      bool any = false;
      for (int e : subset) {
        r.coeff.push_back(coeff[e]);
        any = any || coeff[e] != 0;
      }
      if (!any && rhs.is_negative()) return std::nullopt;
      r.rhs = rhs;
      out.push_back(std::move(r));
    }
    // nonnegativity of each toll variable
    for (size_t i = 0; i < subset.size(); ++i) {
      LinRow r;
      r.coeff.assign(subset.size(), 0);
      r.coeff[i] = -1;
      out.push_back(std::move(r));
    }
    dedup_rows(out);
    return out;
  }
};

TollVector assemble_tolls(const Game& game, const std::vector<int>& subset,
                          const std::vector<Rational>& values) {
  std::map<EdgeId, Rational> entries;
  for (size_t i = 0; i < subset.size(); ++i)
    entries.emplace(game.graph().edge(subset[i]).id, values[i]);
  return TollVector(std::move(entries));
}

}  // namespace

std::optional<TollVector> toll_feasible(const Game& game, const State& state,
                                        const std::vector<EdgeId>& subset,
                                        const OracleBudgets& budgets) {
  std::vector<int> idxs;
  for (const EdgeId& e : subset) idxs.push_back(game.graph().edge_index(e));
  std::sort(idxs.begin(), idxs.end());
  idxs.erase(std::unique(idxs.begin(), idxs.end()), idxs.end());

  DeviationSystem system(game, state, budgets.max_paths);
  auto rows = system.restrict_to(idxs);
  if (!rows || !fm_feasible(*rows, idxs.size(), budgets.max_fm_rows)) return std::nullopt;
  return assemble_tolls(game, idxs, fm_min_total(*rows, idxs.size(), budgets.max_fm_rows));
}

MintbResult min_tollbooths(const Game& game, const State& state, const OracleBudgets& budgets) {
  DeviationSystem system(game, state, budgets.max_paths);
  // Candidate edges in id order, so subset enumeration is lexicographic.
  std::vector<int> by_id(game.graph().edge_count());
  for (int e = 0; e < game.graph().edge_count(); ++e) by_id[e] = e;
  std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
    return game.graph().edge(a).id < game.graph().edge(b).id;
  });

  int m = game.graph().edge_count();
  int max_size = std::min(budgets.max_subset_size, m);
  for (int k = 0; k <= max_size; ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<int> subset;
      subset.reserve(k);
      for (int i : pick) subset.push_back(by_id[i]);
      std::sort(subset.begin(), subset.end());
      auto rows = system.restrict_to(subset);
      if (rows && fm_feasible(*rows, subset.size(), budgets.max_fm_rows)) {
        MintbResult result;
        result.count = k;
        result.tolls =
            assemble_tolls(game, subset, fm_min_total(*rows, subset.size(), budgets.max_fm_rows));
        result.support = result.tolls.support();
        if (static_cast<int>(result.support.size()) != k)
          throw internal_error("minimal toll set with a slack edge");
        return result;
      }
      // next k-combination in lexicographic order
      int i = k - 1;
      while (i >= 0 && pick[i] == m - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  throw budget_error("no toll set within subset-size budget " + std::to_string(max_size));
}

bool pne_exhaustive(const Game& game, const TollVector& tolls, const State& state,
                    const OracleBudgets& budgets) {
  validate_tolls(game, tolls);
  std::vector<int> loads = edge_loads(game, state);
  for (const Player& p : game.players()) {
    const Path& own = state.path(p.id);
    std::set<EdgeId> own_set(own.begin(), own.end());
    Rational cur;
    for (const EdgeId& e : own)
      cur += game.cost(game.graph().edge_index(e), loads[game.graph().edge_index(e)]) + tolls.get(e);
    for (const Path& alt : enum_paths(game, p.id, std::nullopt, budgets.max_paths)) {
      Rational dev;
      for (const EdgeId& e : alt) {
        int idx = game.graph().edge_index(e);
        dev += game.cost(idx, own_set.count(e) ? loads[idx] : loads[idx] + 1) + tolls.get(e);
      }
      if (dev < cur) return false;
    }
  }
  return true;
}

}  // namespace mintb
