#include "sf/gsp.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sf/reduction.hpp"

namespace sf {

namespace {

std::vector<int> dummy_base(const std::vector<int>& caps, int n) {
  std::vector<int> base(n + 1);
  base[0] = n;
  for (int i = 1; i <= n; ++i) base[i] = base[i - 1] + caps[i - 1];
  return base;  // dummy j of agent i has id base[i-1] + j
}

}  // namespace

void Gsp1::canonicalize() {
  for (auto& cycle : cycles) {
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
  }
  std::sort(cycles.begin(), cycles.end());
}

void HalfMatching::normalize() {
  for (auto& e : half) e = ordered_pair(e.first, e.second);
  for (auto& e : full) e = ordered_pair(e.first, e.second);
  std::sort(half.begin(), half.end());
  std::sort(full.begin(), full.end());
}

void Matching::normalize() {
  for (auto& e : pairs) e = ordered_pair(e.first, e.second);
  std::sort(pairs.begin(), pairs.end());
}

AgentId Gsp2::dummy_owner(AgentId d) const {
  int upper = n_real;
  for (AgentId i = 1; i <= n_real; ++i) {
    upper += caps[i - 1];
    if (d <= upper) return i;
  }
  throw std::out_of_range("not a dummy id");
}

int Gsp2::dummy_index(AgentId d) const {
  const AgentId owner = dummy_owner(d);
  return d - dummy_id(owner, 1) + 1;
}

AgentId Gsp2::dummy_id(AgentId owner, int index) const {
  int base = n_real;
  for (AgentId i = 1; i < owner; ++i) base += caps[i - 1];
  return base + index;
}

SfInstance augment_with_dummies(const SfInstance& inst) {
  const int n = inst.agent_count();
  const auto base = dummy_base(inst.capacities(), n);
  const int n_aug = base[n];
  std::vector<std::vector<AgentId>> prefs(n_aug);
  std::vector<int> caps(n_aug, 1);
  for (AgentId i = 1; i <= n; ++i) {
    prefs[i - 1] = inst.preferences(i);
    for (int j = 1; j <= inst.capacity(i); ++j)
      prefs[i - 1].push_back(base[i - 1] + j);
    caps[i - 1] = inst.capacity(i);
    for (int j = 1; j <= inst.capacity(i); ++j)
      prefs[base[i - 1] + j - 1] = {i};
  }
  return SfInstance(std::move(prefs), std::move(caps), /*incomplete=*/true);
}

Gsp2 gsp2_from_gsp1(const SfInstance& inst, const Gsp1& g1) {
  Verdict v = validate_gsp1(inst, g1);
  if (!v.ok)
    throw std::invalid_argument("gsp2_from_gsp1: invalid GSP1: " +
                                v.condition + " " + v.detail);
  const int n = inst.agent_count();
  const auto base = dummy_base(inst.capacities(), n);
  Gsp2 g2;
  g2.n_real = n;
  g2.caps = inst.capacities();
  g2.succ.assign(base[n] + 1, {});
  g2.pred.assign(base[n] + 1, {});
  std::vector<int> dummies_used(n + 1, 0);
  for (const auto& cycle : g1.cycles) {
    if (cycle.size() == 1) {
      const AgentId a = cycle[0];
      const AgentId d = base[a - 1] + (++dummies_used[a]);
      g2.succ[a].push_back(d);
      g2.pred[a].push_back(d);
      g2.succ[d] = {a};
      g2.pred[d] = {a};
      continue;
    }
    for (size_t i = 0; i < cycle.size(); ++i) {
      const AgentId a = cycle[i];
      const AgentId b = cycle[(i + 1) % cycle.size()];
      g2.succ[a].push_back(b);
      g2.pred[b].push_back(a);
    }
  }
  for (AgentId a = 1; a <= n; ++a)
    for (int j = dummies_used[a] + 1; j <= inst.capacity(a); ++j) {
      const AgentId d = base[a - 1] + j;
      g2.succ[d] = {d};
      g2.pred[d] = {d};
    }
  for (auto& s : g2.succ) std::sort(s.begin(), s.end());
  for (auto& p : g2.pred) std::sort(p.begin(), p.end());
  return g2;
}

Gsp1 gsp1_from_gsp2(const SfInstance& inst, const Gsp2& g2) {
  Verdict v = validate_gsp2(inst, g2);
  if (!v.ok)
    throw std::invalid_argument("gsp1_from_gsp2: invalid GSP2: " +
                                v.condition + " " + v.detail);
  const int n = g2.n_real;
  auto succ = g2.succ;
  auto pred = g2.pred;
  auto remove_one = [](std::vector<AgentId>& xs, AgentId x) {
    auto it = std::find(xs.begin(), xs.end(), x);
    if (it == xs.end())
      throw std::invalid_argument("gsp1_from_gsp2: inconsistent sets");
    xs.erase(it);
  };

  Gsp1 g1;
  for (AgentId a = 1; a <= n; ++a) {
    // Transpositions and fixed points first: everything in P(a) and S(a).
    std::vector<AgentId> both;
    for (AgentId x : succ[a])
      if (std::find(pred[a].begin(), pred[a].end(), x) != pred[a].end())
        both.push_back(x);
    for (AgentId x : both) {
      remove_one(succ[a], x);
      remove_one(pred[a], x);
      remove_one(succ[x], a);
      remove_one(pred[x], a);
      if (g2.is_dummy(x))
        g1.cycles.push_back({a});  // free capacity shows as a fixed point
      else
        g1.cycles.push_back({a, x});
    }
  }
  for (AgentId a = 1; a <= n; ++a) {
    // The unique longer cycle through a, if any, traced along S \ P.
    std::vector<AgentId> only_succ;
    for (AgentId x : succ[a])
      if (std::find(pred[a].begin(), pred[a].end(), x) == pred[a].end())
        only_succ.push_back(x);
    if (only_succ.empty()) continue;
    if (only_succ.size() > 1)
      throw std::invalid_argument(
          "gsp1_from_gsp2: agent has several successor candidates");
    std::vector<AgentId> cycle{a};
    AgentId r = only_succ.front();
    remove_one(succ[a], r);
    remove_one(pred[r], a);
    while (r != a) {
      cycle.push_back(r);
      std::vector<AgentId> nexts;
      for (AgentId x : succ[r])
        if (std::find(pred[r].begin(), pred[r].end(), x) == pred[r].end())
          nexts.push_back(x);
      if (nexts.size() != 1)
        throw std::invalid_argument(
            "gsp1_from_gsp2: cycle tracing failed to close");
      const AgentId next = nexts.front();
      remove_one(succ[r], next);
      remove_one(pred[next], r);
      r = next;
    }
    g1.cycles.push_back(std::move(cycle));
  }
  g1.canonicalize();
  return g1;
}

HalfMatching half_matching_from_gsp(const Gsp1& g1) {
  std::map<AgentPair, int> units;
  for (const auto& cycle : g1.cycles) {
    if (cycle.size() == 1) continue;
    if (cycle.size() == 2) {
      units[ordered_pair(cycle[0], cycle[1])] += 2;
      continue;
    }
    for (size_t i = 0; i < cycle.size(); ++i)
      units[ordered_pair(cycle[i], cycle[(i + 1) % cycle.size()])] += 1;
  }
  HalfMatching hm;
  for (const auto& [e, w] : units) {
    if (w == 1)
      hm.half.push_back(e);
    else if (w == 2)
      hm.full.push_back(e);
    else
      throw std::invalid_argument("cycles assign more than weight 1 to a pair");
  }
  hm.normalize();
  return hm;
}

HalfMatching half_matching_from_gsp(const Gsp2& g2) {
  HalfMatching hm;
  for (AgentId a = 1; a <= g2.n_real; ++a) {
    for (AgentId x : g2.succ[a]) {
      if (g2.is_dummy(x)) continue;
      const bool also_pred = std::find(g2.pred[a].begin(), g2.pred[a].end(),
                                       x) != g2.pred[a].end();
      if (also_pred) {
        if (a < x) hm.full.push_back({a, x});
      } else {
        hm.half.push_back(ordered_pair(a, x));
      }
    }
  }
  hm.normalize();
  return hm;
}

Gsp2 gsp2_from_half_matching(const SfInstance& inst, const HalfMatching& hm) {
  Verdict v = validate_half_matching(inst, hm);
  if (!v.ok)
    throw std::invalid_argument("gsp2_from_half_matching: not stable: " +
                                v.condition + " " + v.detail);
  const int n = inst.agent_count();
  const auto base = dummy_base(inst.capacities(), n);
  Gsp2 g2;
  g2.n_real = n;
  g2.caps = inst.capacities();
  g2.succ.assign(base[n] + 1, {});
  g2.pred.assign(base[n] + 1, {});

  // Weighted incidences per agent, in half-units.
  std::vector<std::vector<std::pair<int, int>>> incid(n + 1);  // (rank, units)
  std::vector<int> alloc(n + 1, 0);
  auto add = [&](AgentPair e, int units) {
    incid[e.first].push_back({inst.rank_of(e.first, e.second).value, units});
    incid[e.second].push_back({inst.rank_of(e.second, e.first).value, units});
    alloc[e.first] += units;
    alloc[e.second] += units;
  };
  for (auto e : hm.half) add(e, 1);
  for (auto e : hm.full) add(e, 2);
  for (AgentId a = 1; a <= n; ++a)
    std::sort(incid[a].begin(), incid[a].end());

  auto saturated_at = [&](AgentId a, int rank) {
    int sum = 0;
    for (auto [r, u] : incid[a]) {
      if (r > rank) break;
      sum += u;
    }
    return sum == 2 * inst.capacity(a);
  };

  for (auto [i, j] : hm.full) {
    g2.succ[i].push_back(j);
    g2.pred[i].push_back(j);
    g2.succ[j].push_back(i);
    g2.pred[j].push_back(i);
  }
  for (auto [i, j] : hm.half) {
    const bool sat_i = saturated_at(i, inst.rank_of(i, j).value);
    const bool sat_j = saturated_at(j, inst.rank_of(j, i).value);
    if (sat_i == sat_j)
      throw std::invalid_argument(
          "gsp2_from_half_matching: cannot orient half edge");
    if (sat_i) {  // the saturated endpoint is the successor
      g2.succ[j].push_back(i);
      g2.pred[i].push_back(j);
    } else {
      g2.succ[i].push_back(j);
      g2.pred[j].push_back(i);
    }
  }
  for (AgentId a = 1; a <= n; ++a) {
    if (alloc[a] % 2 != 0)
      throw std::invalid_argument(
          "gsp2_from_half_matching: fractional free capacity");
    const int free = inst.capacity(a) - alloc[a] / 2;
    for (int j = 1; j <= inst.capacity(a); ++j) {
      const AgentId d = base[a - 1] + j;
      if (j <= free) {
        g2.succ[a].push_back(d);
        g2.pred[a].push_back(d);
        g2.succ[d] = {a};
        g2.pred[d] = {a};
      } else {
        g2.succ[d] = {d};
        g2.pred[d] = {d};
      }
    }
  }
  for (auto& s : g2.succ) std::sort(s.begin(), s.end());
  for (auto& p : g2.pred) std::sort(p.begin(), p.end());
  return g2;
}

Verdict validate_gsp1(const SfInstance& inst, const Gsp1& g1) {
  const int n = inst.agent_count();
  std::vector<int> multiplicity(n + 1, 0);
  std::map<AgentPair, int> incidence;
  std::vector<std::vector<AgentId>> seen_cycles;
  for (const auto& cycle : g1.cycles) {
    if (cycle.empty()) return Verdict::fail("structure", "empty cycle");
    std::vector<char> in_cycle(n + 1, 0);
    for (AgentId a : cycle) {
      if (a < 1 || a > n)
        return Verdict::fail("structure", "unknown agent id", {a});
      if (in_cycle[a])
        return Verdict::fail("structure",
                             "agent " + std::to_string(a) +
                                 " repeats inside one cycle",
                             {a});
      in_cycle[a] = 1;
      ++multiplicity[a];
    }
    if (cycle.size() >= 2) {
      auto canon = cycle;
      auto smallest = std::min_element(canon.begin(), canon.end());
      std::rotate(canon.begin(), smallest, canon.end());
      if (std::find(seen_cycles.begin(), seen_cycles.end(), canon) !=
          seen_cycles.end())
        return Verdict::fail("structure", "duplicate cycle", {canon[0]});
      seen_cycles.push_back(canon);
      for (size_t i = 0; i < cycle.size(); ++i)
        ++incidence[ordered_pair(cycle[i], cycle[(i + 1) % cycle.size()])];
    }
  }
  // F1: successor weakly preferred to predecessor inside every cycle.
  for (const auto& cycle : g1.cycles) {
    const size_t k = cycle.size();
    for (size_t i = 0; i < k; ++i) {
      const AgentId p = cycle[(i + k - 1) % k], a = cycle[i],
                    s = cycle[(i + 1) % k];
      if (inst.rank_of(a, s).value > inst.rank_of(a, p).value)
        return Verdict::fail("F1",
                             "agent " + std::to_string(a) +
                                 " prefers predecessor " + std::to_string(p) +
                                 " to successor " + std::to_string(s),
                             {a});
    }
  }
  // F3: one layer per unit of capacity.
  for (AgentId a = 1; a <= n; ++a)
    if (multiplicity[a] != inst.capacity(a))
      return Verdict::fail("F3",
                           "agent " + std::to_string(a) + " lies in " +
                               std::to_string(multiplicity[a]) +
                               " cycles but has capacity " +
                               std::to_string(inst.capacity(a)),
                           {a});
  // F4: at most two successor/predecessor incidences per pair.
  for (const auto& [e, count] : incidence)
    if (count > 2)
      return Verdict::fail("F4",
                           "agents " + std::to_string(e.first) + " and " +
                               std::to_string(e.second) +
                               " are adjacent in too many cycles",
                           {e.first, e.second});
  // F2: no blocking pair outside a shared transposition.
  std::vector<int> worst_pred(n + 1, 0);
  for (const auto& cycle : g1.cycles) {
    const size_t k = cycle.size();
    for (size_t i = 0; i < k; ++i) {
      const AgentId a = cycle[i], p = cycle[(i + k - 1) % k];
      worst_pred[a] = std::max(worst_pred[a], inst.rank_of(a, p).value);
    }
  }
  auto is_transposition = [&](AgentId a, AgentId b) {
    return incidence.count(ordered_pair(a, b)) &&
           incidence.at(ordered_pair(a, b)) == 2;
  };
  for (AgentId i = 1; i <= n; ++i) {
    for (AgentId j : inst.preferences(i)) {
      if (inst.rank_of(i, j).value >= worst_pred[i]) break;
      if (worst_pred[j] == 0 || !inst.acceptable(j, i)) continue;
      if (inst.rank_of(j, i).value < worst_pred[j] &&
          !is_transposition(i, j))
        return Verdict::fail("F2",
                             "agents " + std::to_string(i) + " and " +
                                 std::to_string(j) + " block",
                             {i, j});
    }
  }
  return Verdict::pass();
}

Verdict validate_gsp2(const SfInstance& inst, const Gsp2& g2) {
  const int n = inst.agent_count();
  if (g2.n_real != n)
    return Verdict::fail("structure", "agent count mismatch");
  const SfInstance aug = augment_with_dummies(inst);
  const int n_aug = aug.agent_count();
  if (g2.augmented_count() != n_aug + 1)
    return Verdict::fail("structure", "set table has wrong size");
  for (AgentId a = 1; a <= n_aug; ++a) {
    for (const auto* side : {&g2.succ[a], &g2.pred[a]}) {
      std::vector<AgentId> sorted = *side;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return Verdict::fail("structure", "duplicate set entry", {a});
      for (AgentId x : sorted) {
        if (x < 1 || x > n_aug)
          return Verdict::fail("structure", "unknown id in set", {a});
        if (x != a && !aug.acceptable(a, x))
          return Verdict::fail("structure",
                               "set pairs unacceptable agents", {a, x});
      }
    }
  }
  // G3
  for (AgentId a = 1; a <= n_aug; ++a) {
    const int cap = aug.capacity(a);
    if (static_cast<int>(g2.succ[a].size()) != cap ||
        static_cast<int>(g2.pred[a].size()) != cap)
      return Verdict::fail("G3",
                           "agent " + std::to_string(a) +
                               " has set sizes different from its capacity",
                           {a});
  }
  // G4 (self entries pair with themselves)
  auto contains = [](const std::vector<AgentId>& xs, AgentId x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
  };
  for (AgentId a = 1; a <= n_aug; ++a)
    for (AgentId x : g2.succ[a])
      if (!contains(g2.pred[x], a))
        return Verdict::fail("G4",
                             std::to_string(x) + " in S(" + std::to_string(a) +
                                 ") but " + std::to_string(a) + " not in P(" +
                                 std::to_string(x) + ")",
                             {a, x});
  for (AgentId a = 1; a <= n_aug; ++a)
    for (AgentId x : g2.pred[a])
      if (!contains(g2.succ[x], a))
        return Verdict::fail("G4",
                             std::to_string(x) + " in P(" + std::to_string(a) +
                                 ") but " + std::to_string(a) + " not in S(" +
                                 std::to_string(x) + ")",
                             {a, x});
  // G1 via the sorted-greedy criterion: the k-th best successor must be at
  // least as good as the k-th best predecessor.
  for (AgentId a = 1; a <= n_aug; ++a) {
    auto by_rank = [&](AgentId x, AgentId y) {
      return aug.rank_of(a, x).value < aug.rank_of(a, y).value;
    };
    std::vector<AgentId> s = g2.succ[a], p = g2.pred[a];
    std::sort(s.begin(), s.end(), by_rank);
    std::sort(p.begin(), p.end(), by_rank);
    for (size_t k = 0; k < s.size(); ++k)
      if (aug.rank_of(a, s[k]).value > aug.rank_of(a, p[k]).value)
        return Verdict::fail("G1",
                             "no rank-dominating bijection for agent " +
                                 std::to_string(a),
                             {a});
  }
  // G2
  std::vector<int> worst_pred(n_aug + 1, 0);
  for (AgentId a = 1; a <= n_aug; ++a)
    for (AgentId x : g2.pred[a])
      worst_pred[a] = std::max(worst_pred[a], aug.rank_of(a, x).value);
  for (AgentId i = 1; i <= n_aug; ++i) {
    for (AgentId j : aug.preferences(i)) {
      if (aug.rank_of(i, j).value >= worst_pred[i]) break;
      const bool fully_matched =
          contains(g2.succ[i], j) && contains(g2.pred[i], j);
      if (fully_matched) continue;
      if (aug.rank_of(j, i).value < worst_pred[j])
        return Verdict::fail("G2",
                             "agents " + std::to_string(i) + " and " +
                                 std::to_string(j) + " block",
                             {i, j});
    }
  }
  return Verdict::pass();
}

Verdict validate_half_matching(const SfInstance& inst, const HalfMatching& hm) {
  const int n = inst.agent_count();
  std::map<AgentPair, int> units;
  for (auto [i, j] : hm.half) {
    if (i == j || i < 1 || j < 1 || i > n || j > n)
      return Verdict::fail("structure", "bad pair");
    ++units[ordered_pair(i, j)];
  }
  for (auto [i, j] : hm.full) {
    if (i == j || i < 1 || j < 1 || i > n || j > n)
      return Verdict::fail("structure", "bad pair");
    units[ordered_pair(i, j)] += 2;
  }
  if (units.size() != hm.half.size() + hm.full.size())
    return Verdict::fail("structure", "pair listed twice");
  for (const auto& [e, u] : units)
    if (!inst.acceptable(e.first, e.second) ||
        !inst.acceptable(e.second, e.first))
      return Verdict::fail("structure", "weighted pair is unacceptable",
                           {e.first, e.second});
  std::vector<std::vector<std::pair<int, int>>> incid(n + 1);
  std::vector<int> alloc(n + 1, 0);
  for (const auto& [e, u] : units) {
    incid[e.first].push_back({inst.rank_of(e.first, e.second).value, u});
    incid[e.second].push_back({inst.rank_of(e.second, e.first).value, u});
    alloc[e.first] += u;
    alloc[e.second] += u;
  }
  for (AgentId a = 1; a <= n; ++a) {
    std::sort(incid[a].begin(), incid[a].end());
    if (alloc[a] > 2 * inst.capacity(a))
      return Verdict::fail("capacity",
                           "agent " + std::to_string(a) + " is over capacity",
                           {a});
  }
  auto saturated_at = [&](AgentId a, int rank) {
    int sum = 0;
    for (auto [r, u] : incid[a]) {
      if (r > rank) break;
      sum += u;
    }
    return sum == 2 * inst.capacity(a);
  };
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j : inst.preferences(i)) {
      if (j < i) continue;
      if (!inst.acceptable(j, i)) continue;
      auto it = units.find({i, j});
      const int u = it == units.end() ? 0 : it->second;
      if (u == 2) continue;
      if (!saturated_at(i, inst.rank_of(i, j).value) &&
          !saturated_at(j, inst.rank_of(j, i).value))
        return Verdict::fail("stability",
                             "edge {" + std::to_string(i) + "," +
                                 std::to_string(j) +
                                 "} is underweighted with no saturated end",
                             {i, j});
    }
  return Verdict::pass();
}

Verdict validate_matching(const SfInstance& inst, const Matching& m) {
  return validate_matching(inst, m, inst.capacities());
}

Verdict validate_matching(const SfInstance& inst, const Matching& m,
                          const std::vector<int>& caps) {
  const int n = inst.agent_count();
  std::vector<int> deg(n + 1, 0), worst(n + 1, 0);
  std::map<AgentPair, int> present;
  for (auto [i, j] : m.pairs) {
    if (i == j || i < 1 || j < 1 || i > n || j > n)
      return Verdict::fail("structure", "bad pair");
    if (!inst.acceptable(i, j) || !inst.acceptable(j, i))
      return Verdict::fail("structure", "matched pair is unacceptable",
                           {i, j});
    if (++present[ordered_pair(i, j)] > 1)
      return Verdict::fail("structure", "duplicate pair", {i, j});
    ++deg[i];
    ++deg[j];
    worst[i] = std::max(worst[i], inst.rank_of(i, j).value);
    worst[j] = std::max(worst[j], inst.rank_of(j, i).value);
  }
  for (AgentId a = 1; a <= n; ++a)
    if (deg[a] > caps[a - 1])
      return Verdict::fail("capacity",
                           "agent " + std::to_string(a) + " is over capacity",
                           {a});
  auto wants = [&](AgentId a, AgentId b) {
    if (deg[a] < caps[a - 1]) return true;
    return deg[a] > 0 && inst.rank_of(a, b).value < worst[a];
  };
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j : inst.preferences(i)) {
      if (j < i) continue;
      if (!inst.acceptable(j, i)) continue;
      if (present.count({i, j})) continue;
      if (wants(i, j) && wants(j, i))
        return Verdict::fail("blocking-pair",
                             "agents " + std::to_string(i) + " and " +
                                 std::to_string(j) + " block",
                             {i, j});
    }
  return Verdict::pass();
}

Gsp1 reduce_gsp(const SfInstance& inst, const Gsp1& g1) {
  (void)inst;
  Gsp1 out;
  for (auto cycle : g1.cycles) {
    if (cycle.size() >= 4 && cycle.size() % 2 == 0) {
      // Pair off consecutive members starting at the canonical first agent.
      auto smallest = std::min_element(cycle.begin(), cycle.end());
      std::rotate(cycle.begin(), smallest, cycle.end());
      for (size_t i = 0; i + 1 < cycle.size(); i += 2)
        out.cycles.push_back({cycle[i], cycle[i + 1]});
    } else {
      out.cycles.push_back(std::move(cycle));
    }
  }
  out.canonicalize();
  return out;
}

std::vector<std::vector<AgentId>> odd_cycles(const Gsp1& g1) {
  Gsp1 canon = g1;
  canon.canonicalize();
  std::vector<std::vector<AgentId>> odd;
  for (const auto& cycle : canon.cycles)
    if (cycle.size() >= 3 && cycle.size() % 2 == 1) odd.push_back(cycle);
  return odd;
}

Matching matching_from_reduced_gsp(const Gsp1& g1) {
  Matching m;
  for (const auto& cycle : g1.cycles)
    if (cycle.size() == 2) m.pairs.push_back(ordered_pair(cycle[0], cycle[1]));
  m.normalize();
  return m;
}

SolvabilityResult decide_solvable(const SfInstance& inst) {
  SolvabilityResult result;
  result.gsp = reduce_gsp(inst, compute_gsp(inst));
  result.certificate = odd_cycles(result.gsp);
  result.solvable = result.certificate.empty();
  if (result.solvable) {
    result.matching = matching_from_reduced_gsp(result.gsp);
    Verdict v = validate_matching(inst, result.matching);
    if (!v.ok)
      throw std::logic_error("decide_solvable: extracted matching unstable: " +
                             v.detail);
  }
  return result;
}

std::vector<int> allocation_vector(const HalfMatching& hm, int n) {
  std::vector<int> alloc(n, 0);
  for (auto [i, j] : hm.half) {
    alloc[i - 1] += 1;
    alloc[j - 1] += 1;
  }
  for (auto [i, j] : hm.full) {
    alloc[i - 1] += 2;
    alloc[j - 1] += 2;
  }
  return alloc;
}

std::vector<int> allocation_vector(const SfInstance& inst, const Gsp1& g1) {
  std::vector<int> alloc(inst.agent_count(), 0);
  for (const auto& cycle : g1.cycles) {
    if (cycle.size() < 2) continue;
    for (AgentId a : cycle) alloc[a - 1] += 2;
  }
  return alloc;
}

std::vector<int> allocation_vector(const Gsp2& g2) {
  std::vector<int> alloc(g2.n_real, 0);
  for (AgentId a = 1; a <= g2.n_real; ++a) {
    for (AgentId x : g2.succ[a])
      if (!g2.is_dummy(x)) ++alloc[a - 1];
    for (AgentId x : g2.pred[a])
      if (!g2.is_dummy(x)) ++alloc[a - 1];
  }
  return alloc;
}

std::string format_half_matching(const HalfMatching& hm) {
  std::ostringstream out;
  out << "HALF:\n";
  for (auto [i, j] : hm.half) out << i << ' ' << j << '\n';
  out << "FULL:\n";
  for (auto [i, j] : hm.full) out << i << ' ' << j << '\n';
  return out.str();
}

HalfMatching parse_half_matching(const std::string& text) {
  HalfMatching hm;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int section = 0;  // 0 none, 1 half, 2 full
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string trimmed = line.substr(start);
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
      trimmed.pop_back();
    if (trimmed == "HALF:") {
      section = 1;
      continue;
    }
    if (trimmed == "FULL:") {
      section = 2;
      continue;
    }
    if (section == 0) throw ParseError(lineno, "expected HALF: or FULL:");
    std::istringstream fields(trimmed);
    AgentId i, j;
    if (!(fields >> i >> j)) throw ParseError(lineno, "expected 'i j'");
    std::string rest;
    if (fields >> rest) throw ParseError(lineno, "trailing data");
    (section == 1 ? hm.half : hm.full).push_back({i, j});
  }
  hm.normalize();
  return hm;
}

}  // namespace sf
