#pragma once

#include <utility>
#include <vector>

#include "sf/gsp.hpp"
#include "sf/instance.hpp"

namespace sf {

/// How odd cycles are decomposed: alternate between raising and lowering one
/// agent's capacity per cycle (the default, which keeps the net change at 0
/// or 1), or force all changes in one direction.
enum class RepairDirection { alternate, increase_only, decrease_only };

struct RepairResult {
  std::vector<int> new_caps;
  Matching matching;  // stable under new_caps
  std::vector<std::pair<AgentId, int>> modified;  // (agent, +1/-1), in order

  int total_change() const {
    int sum = 0;
    for (auto [a, d] : modified) sum += d;
    return sum;
  }
};

/// Turns a GSP into a stable matching of a near-feasible instance: each odd
/// cycle of length >= 3 costs one +-1 capacity change on its canonical first
/// agent; everything else decomposes into matches directly.
RepairResult near_feasible(const SfInstance& inst, const Gsp1& g1);
RepairResult near_feasible_directed(const SfInstance& inst, const Gsp1& g1,
                                    RepairDirection direction);

}  // namespace sf
