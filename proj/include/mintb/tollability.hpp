#pragma once

#include <vector>

#include "mintb/rational.hpp"
#include "mintb/game.hpp"

namespace mintb {

/// One row of a tollability list: by tolling at most `eta` edges inside the
/// node's subnetwork, `lambda` is the highest cost enforceable on a hypothetical
/// player entering it (while every resident player keeps its current path).
/// Inner-node entries remember which child entries they combined (idx_v/idx_w
/// are 0-based positions in the children's entry vectors; -1 at leaves).
struct TollabilityEntry {
  int eta = 0;
  ExtCost lambda;
  int idx_v = -1, idx_w = -1;
};

/// Entries run over consecutive eta values, from the minimum needed to keep
/// residents in place up to the count that saturates every path (lambda
/// infinite there and only there).  lambda0 is the cheapest entry cost
/// compatible with keeping residents in place.
struct TollabilityList {
  ExtCost lambda0;
  std::vector<TollabilityEntry> entries;

  int eta_min() const { return entries.front().eta; }
  int eta_max() const { return entries.back().eta; }
  /// Smallest entry position whose lambda reaches `cost`; the terminal
  /// infinite entry guarantees existence.
  int first_index_reaching(const ExtCost& cost) const;
  /// Structural invariants; violations are bugs, hence internal_error.
  void check_valid() const;
};

/// A parallel link as the list builder sees it: its cost at the current load
/// (meaningful only when used) and at one more player.
struct LeafEdge {
  EdgeId id;
  bool used = false;
  Rational cost_now;    // c(load), only when used
  Rational cost_plus;   // c(load + 1)
};

/// List for a parallel-link bundle.  Tolling the k cheapest upgrade costs
/// leaves the (k+1)-th as the enforceable entry cost.
TollabilityList leaf_list(const std::vector<LeafEdge>& edges);

/// List for two subnetworks joined end to end: etas add, lambdas add over
/// exact-sum entry pairs (argmax pair recorded, smallest left index on ties).
TollabilityList compose_series(const TollabilityList& lv, const TollabilityList& lw);

/// List for two subnetworks joined side by side.  c_v and c_w are the highest
/// within-node player costs of the respective child once its own pinning
/// tolls are charged (0 when unused): each child must price entry at least at
/// the other side's ceiling, or its residents would migrate across.  Tolls on
/// used edges push residents above the untolled maximum, so the ceilings --
/// not the raw costs -- are the binding values.
TollabilityList compose_parallel(const TollabilityList& lv, const TollabilityList& lw,
                                 const Rational& c_v, const Rational& c_w);

}  // namespace mintb
