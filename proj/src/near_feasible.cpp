#include "sf/near_feasible.hpp"

#include <stdexcept>

namespace sf {

RepairResult near_feasible(const SfInstance& inst, const Gsp1& g1) {
  return near_feasible_directed(inst, g1, RepairDirection::alternate);
}

RepairResult near_feasible_directed(const SfInstance& inst, const Gsp1& g1,
                                    RepairDirection direction) {
  Verdict v = validate_gsp1(inst, g1);
  if (!v.ok)
    throw std::invalid_argument("near_feasible: invalid GSP: " + v.condition +
                                " " + v.detail);
  Gsp1 canon = g1;
  canon.canonicalize();

  RepairResult result;
  result.new_caps = inst.capacities();
  int odd_seen = 0;
  for (const auto& cycle : canon.cycles) {
    const size_t m = cycle.size();
    if (m == 1) continue;
    if (m == 2) {
      result.matching.pairs.push_back(ordered_pair(cycle[0], cycle[1]));
      continue;
    }
    if (m % 2 == 0) {
      for (size_t i = 0; i + 1 < m; i += 2)
        result.matching.pairs.push_back(ordered_pair(cycle[i], cycle[i + 1]));
      continue;
    }
    const AgentId first = cycle[0];
    bool increase = false;
    switch (direction) {
      case RepairDirection::alternate:
        increase = odd_seen % 2 == 0;
        break;
      case RepairDirection::increase_only:
        increase = true;
        break;
      case RepairDirection::decrease_only:
        increase = false;
        break;
    }
    ++odd_seen;
    if (increase) {
      if (result.new_caps[first - 1] >= inst.agent_count() - 1)
        throw std::logic_error(
            "near_feasible: agent " + std::to_string(first) +
            " in a long cycle already has capacity n-1");
      // Wrap the cycle onto the first agent: pairs (0,1)(2,3)...(m-1,0).
      for (size_t i = 0; i + 1 < m; i += 2)
        result.matching.pairs.push_back(ordered_pair(cycle[i], cycle[i + 1]));
      result.matching.pairs.push_back(ordered_pair(cycle[m - 1], cycle[0]));
      result.new_caps[first - 1] += 1;
      result.modified.push_back({first, +1});
    } else {
      // Leave the first agent out: pairs (1,2)(3,4)...(m-2,m-1).
      for (size_t i = 1; i + 1 < m; i += 2)
        result.matching.pairs.push_back(ordered_pair(cycle[i], cycle[i + 1]));
      result.new_caps[first - 1] -= 1;
      result.modified.push_back({first, -1});
    }
  }
  result.matching.normalize();

  Verdict stable = validate_matching(inst, result.matching, result.new_caps);
  if (!stable.ok)
    throw std::logic_error("near_feasible: repaired matching unstable: " +
                           stable.condition + " " + stable.detail);
  return result;
}

}  // namespace sf
