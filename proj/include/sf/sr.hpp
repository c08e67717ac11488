#pragma once

#include <string>
#include <vector>

#include "sf/instance.hpp"
#include "sf/types.hpp"

namespace sf {

/// A stable partition of a capacity-1 instance: a permutation of all agents
/// written as cycles. Canonical form rotates each cycle so its smallest agent
/// comes first and orders cycles lexicographically; all equality checks go
/// through it.
struct SrPartition {
  std::vector<std::vector<AgentId>> cycles;

  void canonicalize();
  bool operator==(const SrPartition& other) const {
    return cycles == other.cycles;
  }

  /// Cycles of odd length >= 3, in canonical order.
  std::vector<std::vector<AgentId>> odd_cycles() const;
};

/// Computes a stable partition of a capacity-1 instance (lists may be
/// incomplete). Tan's extension of the proposal/rotation algorithm: oddly
/// structured rotations are kept as odd parties instead of aborting. The
/// result is verified against T1/T2 before it is returned. Deterministic:
/// ties break towards the lowest agent id.
SrPartition stable_partition_sr(const SfInstance& inst);

/// Checks T1 (everyone weakly prefers their successor to their predecessor)
/// and T2 (no two agents both strictly prefer each other to their
/// predecessors) and that the input is a permutation over acceptable pairs.
Verdict verify_stable_partition(const SfInstance& inst,
                                const SrPartition& part);

/// Partition text format: one cycle per line, "( i1 i2 ... ik )".
std::string format_partition(const std::vector<std::vector<AgentId>>& cycles);
std::vector<std::vector<AgentId>> parse_partition(const std::string& text);

}  // namespace sf
