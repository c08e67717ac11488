#include "sf/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace sf {

namespace {

std::vector<AgentPair> acceptable_pairs(const SfInstance& inst) {
  std::vector<AgentPair> pairs;
  const int n = inst.agent_count();
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j = i + 1; j <= n; ++j)
      if (inst.acceptable(i, j) && inst.acceptable(j, i))
        pairs.emplace_back(i, j);
  return pairs;
}

// Shared scratch for the subset/weight searches.
struct SearchState {
  const SfInstance* inst;
  std::vector<AgentPair> pairs;
  std::vector<int> weight;  // half-units per pair
  std::vector<int> alloc;   // half-units per agent, index 0-based
};

bool matching_leaf_stable(const SearchState& s) {
  const SfInstance& inst = *s.inst;
  const int n = inst.agent_count();
  std::vector<int> worst(n, 0), deg(n, 0);
  for (size_t e = 0; e < s.pairs.size(); ++e) {
    if (s.weight[e] == 0) continue;
    auto [i, j] = s.pairs[e];
    ++deg[i - 1];
    ++deg[j - 1];
    worst[i - 1] = std::max(worst[i - 1], inst.rank_of(i, j).value);
    worst[j - 1] = std::max(worst[j - 1], inst.rank_of(j, i).value);
  }
  for (size_t e = 0; e < s.pairs.size(); ++e) {
    if (s.weight[e] != 0) continue;
    auto [i, j] = s.pairs[e];
    bool i_wants = deg[i - 1] < inst.capacity(i) ||
                   (deg[i - 1] > 0 && inst.rank_of(i, j).value < worst[i - 1]);
    bool j_wants = deg[j - 1] < inst.capacity(j) ||
                   (deg[j - 1] > 0 && inst.rank_of(j, i).value < worst[j - 1]);
    if (i_wants && j_wants) return false;
  }
  return true;
}

void search_matchings(SearchState& s, size_t e, std::vector<Matching>& out) {
  if (e == s.pairs.size()) {
    if (!matching_leaf_stable(s)) return;
    Matching m;
    for (size_t k = 0; k < s.pairs.size(); ++k)
      if (s.weight[k] == 2) m.pairs.push_back(s.pairs[k]);
    m.normalize();
    out.push_back(std::move(m));
    return;
  }
  auto [i, j] = s.pairs[e];
  s.weight[e] = 0;
  search_matchings(s, e + 1, out);
  if (s.alloc[i - 1] + 2 <= 2 * s.inst->capacity(i) &&
      s.alloc[j - 1] + 2 <= 2 * s.inst->capacity(j)) {
    s.weight[e] = 2;
    s.alloc[i - 1] += 2;
    s.alloc[j - 1] += 2;
    search_matchings(s, e + 1, out);
    s.alloc[i - 1] -= 2;
    s.alloc[j - 1] -= 2;
    s.weight[e] = 0;
  }
}

bool half_leaf_stable(const SearchState& s) {
  const SfInstance& inst = *s.inst;
  for (size_t e = 0; e < s.pairs.size(); ++e) {
    if (s.weight[e] == 2) continue;
    auto [i, j] = s.pairs[e];
    // Saturation of one endpoint at this edge's rank.
    int prefix_i = 0, prefix_j = 0;
    const int rank_ij = inst.rank_of(i, j).value;
    const int rank_ji = inst.rank_of(j, i).value;
    for (size_t f = 0; f < s.pairs.size(); ++f) {
      if (s.weight[f] == 0) continue;
      auto [a, b] = s.pairs[f];
      if (a == i && inst.rank_of(i, b).value <= rank_ij)
        prefix_i += s.weight[f];
      else if (b == i && inst.rank_of(i, a).value <= rank_ij)
        prefix_i += s.weight[f];
      if (a == j && inst.rank_of(j, b).value <= rank_ji)
        prefix_j += s.weight[f];
      else if (b == j && inst.rank_of(j, a).value <= rank_ji)
        prefix_j += s.weight[f];
    }
    if (prefix_i != 2 * inst.capacity(i) && prefix_j != 2 * inst.capacity(j))
      return false;
  }
  return true;
}

void search_half_matchings(SearchState& s, size_t e,
                           std::vector<HalfMatching>& out) {
  if (e == s.pairs.size()) {
    if (!half_leaf_stable(s)) return;
    HalfMatching hm;
    for (size_t k = 0; k < s.pairs.size(); ++k) {
      if (s.weight[k] == 1) hm.half.push_back(s.pairs[k]);
      if (s.weight[k] == 2) hm.full.push_back(s.pairs[k]);
    }
    hm.normalize();
    out.push_back(std::move(hm));
    return;
  }
  auto [i, j] = s.pairs[e];
  for (int w = 0; w <= 2; ++w) {
    if (s.alloc[i - 1] + w > 2 * s.inst->capacity(i)) break;
    if (s.alloc[j - 1] + w > 2 * s.inst->capacity(j)) break;
    s.weight[e] = w;
    s.alloc[i - 1] += w;
    s.alloc[j - 1] += w;
    search_half_matchings(s, e + 1, out);
    s.alloc[i - 1] -= w;
    s.alloc[j - 1] -= w;
  }
  s.weight[e] = 0;
}

}  // namespace

std::vector<Matching> enumerate_stable_matchings(const SfInstance& inst,
                                                 const OracleLimits& limits) {
  SearchState s{&inst, acceptable_pairs(inst), {}, {}};
  if (static_cast<int>(s.pairs.size()) > limits.max_matching_edges)
    throw std::length_error(
        "oracle size guard: " + std::to_string(s.pairs.size()) +
        " edges exceed the matching enumeration limit of " +
        std::to_string(limits.max_matching_edges));
  s.weight.assign(s.pairs.size(), 0);
  s.alloc.assign(inst.agent_count(), 0);
  std::vector<Matching> out;
  search_matchings(s, 0, out);
  std::sort(out.begin(), out.end(),
            [](const Matching& a, const Matching& b) {
              return a.pairs < b.pairs;
            });
  return out;
}

std::vector<HalfMatching> enumerate_stable_half_matchings(
    const SfInstance& inst, const OracleLimits& limits) {
  SearchState s{&inst, acceptable_pairs(inst), {}, {}};
  if (static_cast<int>(s.pairs.size()) > limits.max_half_matching_edges)
    throw std::length_error(
        "oracle size guard: " + std::to_string(s.pairs.size()) +
        " edges exceed the half-matching enumeration limit of " +
        std::to_string(limits.max_half_matching_edges));
  s.weight.assign(s.pairs.size(), 0);
  s.alloc.assign(inst.agent_count(), 0);
  std::vector<HalfMatching> out;
  search_half_matchings(s, 0, out);
  std::sort(out.begin(), out.end(),
            [](const HalfMatching& a, const HalfMatching& b) {
              return std::tie(a.half, a.full) < std::tie(b.half, b.full);
            });
  return out;
}

std::vector<SrPartition> brute_stable_partition_sr(const SfInstance& inst,
                                                   const OracleLimits& limits) {
  const int n = inst.agent_count();
  if (n > limits.max_partition_agents)
    throw std::length_error("oracle size guard: " + std::to_string(n) +
                            " agents exceed the partition enumeration limit");
  for (AgentId i = 1; i <= n; ++i)
    if (inst.capacity(i) != 1)
      throw std::invalid_argument("brute_stable_partition_sr needs caps = 1");

  std::vector<AgentId> succ(n);
  for (int i = 0; i < n; ++i) succ[i] = i + 1;

  std::vector<SrPartition> out;
  do {
    std::vector<AgentId> pred(n + 1);
    bool valid = true;
    for (AgentId i = 1; i <= n && valid; ++i) {
      AgentId t = succ[i - 1];
      if (t != i && !inst.acceptable(i, t)) valid = false;
      pred[t] = i;
    }
    if (!valid) continue;
    // T1
    for (AgentId i = 1; i <= n && valid; ++i)
      if (inst.rank_of(i, succ[i - 1]).value > inst.rank_of(i, pred[i]).value)
        valid = false;
    if (!valid) continue;
    // T2
    for (AgentId i = 1; i <= n && valid; ++i) {
      const int pred_rank_i = inst.rank_of(i, pred[i]).value;
      for (AgentId j : inst.preferences(i)) {
        if (inst.rank_of(i, j).value >= pred_rank_i) break;
        if (inst.acceptable(j, i) &&
            inst.rank_of(j, i).value < inst.rank_of(j, pred[j]).value) {
          valid = false;
          break;
        }
      }
    }
    if (!valid) continue;
    // Decompose into cycles.
    SrPartition part;
    std::vector<char> visited(n + 1, 0);
    for (AgentId i = 1; i <= n; ++i) {
      if (visited[i]) continue;
      std::vector<AgentId> cycle;
      AgentId a = i;
      do {
        visited[a] = 1;
        cycle.push_back(a);
        a = succ[a - 1];
      } while (a != i);
      part.cycles.push_back(std::move(cycle));
    }
    part.canonicalize();
    out.push_back(std::move(part));
  } while (std::next_permutation(succ.begin(), succ.end()));
  std::sort(out.begin(), out.end(),
            [](const SrPartition& a, const SrPartition& b) {
              return a.cycles < b.cycles;
            });
  return out;
}

long long egalitarian_cost_half_units(const SfInstance& inst,
                                      const HalfMatching& hm) {
  long long cost = 0;
  for (auto [i, j] : hm.half)
    cost += inst.rank_of(i, j).value + inst.rank_of(j, i).value;
  for (auto [i, j] : hm.full)
    cost += 2ll * (inst.rank_of(i, j).value + inst.rank_of(j, i).value);
  return cost;
}

int regret_of(const SfInstance& inst, const HalfMatching& hm) {
  int regret = 0;
  auto update = [&](AgentPair e) {
    regret = std::max({regret, inst.rank_of(e.first, e.second).value,
                       inst.rank_of(e.second, e.first).value});
  };
  for (auto e : hm.half) update(e);
  for (auto e : hm.full) update(e);
  return regret;
}

OracleReport oracle_report(const SfInstance& inst, const OracleLimits& limits) {
  OracleReport report;
  report.matchings = enumerate_stable_matchings(inst, limits);
  report.solvable = !report.matchings.empty();
  report.half_matchings = enumerate_stable_half_matchings(inst, limits);
  for (const auto& hm : report.half_matchings) {
    report.allocations.push_back(allocation_vector(hm, inst.agent_count()));
    long long cost = egalitarian_cost_half_units(inst, hm);
    if (report.min_egalitarian_cost < 0 ||
        cost < report.min_egalitarian_cost)
      report.min_egalitarian_cost = cost;
    int r = regret_of(inst, hm);
    if (report.min_regret < 0 || r < report.min_regret)
      report.min_regret = r;
  }
  return report;
}

}  // namespace sf
