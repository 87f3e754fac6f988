#include "mintb/tollability.hpp"

#include <algorithm>

#include "mintb/errors.hpp"

namespace mintb {

int TollabilityList::first_index_reaching(const ExtCost& cost) const {
  for (int i = 0; i < static_cast<int>(entries.size()); ++i)
    if (entries[i].lambda >= cost) return i;
  throw internal_error("tollability list has no entry reaching " + cost.str());
}

void TollabilityList::check_valid() const {
  if (entries.empty()) throw internal_error("empty tollability list");
  if (lambda0.infinite()) throw internal_error("infinite lambda0");
  if (entries.front().eta < 0) throw internal_error("negative eta");
  for (size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].eta != entries[i - 1].eta + 1)
      throw internal_error("tollability etas not consecutive");
    if (entries[i].lambda < entries[i - 1].lambda)
      throw internal_error("tollability lambdas decrease");
  }
  if (!entries.back().lambda.infinite())
    throw internal_error("tollability list does not end at infinity");
  for (size_t i = 0; i + 1 < entries.size(); ++i)
    if (entries[i].lambda.infinite())
      throw internal_error("infinite lambda before the last entry");
  if (entries.front().lambda < lambda0)
    throw internal_error("first lambda below lambda0");
}

TollabilityList leaf_list(const std::vector<LeafEdge>& edges) {
  if (edges.empty()) throw validation_error("leaf bundle with no edges");
  // Highest resident cost; an unused bundle constrains nobody.
  Rational l_max(0);
  bool any_used = false;
  for (const LeafEdge& e : edges) {
    if (!e.used) continue;
    if (!any_used || e.cost_now > l_max) l_max = e.cost_now;
    any_used = true;
  }
  std::vector<Rational> plus;
  plus.reserve(edges.size());
  for (const LeafEdge& e : edges) plus.push_back(e.cost_plus);
  std::sort(plus.begin(), plus.end());

  TollabilityList list;
  list.lambda0 = std::max(l_max, plus.front());
  int eta_min = 0;
  while (eta_min < static_cast<int>(plus.size()) && plus[eta_min] < l_max) ++eta_min;
  int eta_max = static_cast<int>(edges.size());
  for (int eta = eta_min; eta <= eta_max; ++eta) {
    TollabilityEntry entry;
    entry.eta = eta;
    entry.lambda = eta == eta_max ? ExtCost::infinity() : ExtCost(plus[eta]);
    list.entries.push_back(std::move(entry));
  }
  list.check_valid();
  return list;
}

TollabilityList compose_series(const TollabilityList& lv, const TollabilityList& lw) {
  TollabilityList list;
  list.lambda0 = ExtCost(lv.lambda0.value() + lw.lambda0.value());
  int eta1 = lv.eta_min() + lw.eta_min();
  int eta_max = std::min(lv.eta_min() + lw.eta_max(), lv.eta_max() + lw.eta_min());
  list.entries.resize(eta_max - eta1 + 1);
  for (int i = 0; i <= eta_max - eta1; ++i) list.entries[i].eta = eta1 + i;
  std::vector<bool> filled(list.entries.size(), false);
  for (int a = 0; a < static_cast<int>(lv.entries.size()); ++a) {
    for (int b = 0; b < static_cast<int>(lw.entries.size()); ++b) {
      int eta = lv.entries[a].eta + lw.entries[b].eta;
      if (eta < eta1 || eta > eta_max) continue;
      ExtCost lambda = lv.entries[a].lambda + lw.entries[b].lambda;
      TollabilityEntry& slot = list.entries[eta - eta1];
      if (!filled[eta - eta1] || lambda > slot.lambda) {
        slot.lambda = lambda;
        slot.idx_v = a;
        slot.idx_w = b;
        filled[eta - eta1] = true;
      }
    }
  }
  for (bool f : filled)
    if (!f) throw internal_error("series composition left a gap");
  list.check_valid();
  return list;
}

TollabilityList compose_parallel(const TollabilityList& lv, const TollabilityList& lw,
                                 const Rational& c_v, const Rational& c_w) {
  TollabilityList list;
  const Rational c_max = std::max(c_v, c_w);
  list.lambda0 = ExtCost(std::max(c_max, std::min(lv.lambda0.value(), lw.lambda0.value())));
  // Each side must block the other side's residents from migrating in.
  int eta1 = lv.entries[lv.first_index_reaching(ExtCost(c_w))].eta +
             lw.entries[lw.first_index_reaching(ExtCost(c_v))].eta;
  int eta_max = lv.eta_max() + lw.eta_max();
  list.entries.resize(eta_max - eta1 + 1);
  for (int i = 0; i <= eta_max - eta1; ++i) list.entries[i].eta = eta1 + i;
  std::vector<bool> filled(list.entries.size(), false);
  for (int a = 0; a < static_cast<int>(lv.entries.size()); ++a) {
    for (int b = 0; b < static_cast<int>(lw.entries.size()); ++b) {
      int eta = lv.entries[a].eta + lw.entries[b].eta;
      if (eta < eta1 || eta > eta_max) continue;
      ExtCost lambda = std::min(lv.entries[a].lambda, lw.entries[b].lambda);
      TollabilityEntry& slot = list.entries[eta - eta1];
      if (!filled[eta - eta1] || lambda > slot.lambda) {
        slot.lambda = lambda;
        slot.idx_v = a;
        slot.idx_w = b;
        filled[eta - eta1] = true;
      }
    }
  }
  for (bool f : filled)
    if (!f) throw internal_error("parallel composition left a gap");
  list.check_valid();
  return list;
}

}  // namespace mintb
