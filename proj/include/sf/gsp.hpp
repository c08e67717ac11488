#pragma once

#include <string>
#include <vector>

#include "sf/instance.hpp"
#include "sf/sr.hpp"
#include "sf/types.hpp"

namespace sf {

/// A generalised stable partition in cycle form: a multiset of cyclic
/// permutations, one layer per unit of capacity. Fixed points may repeat;
/// longer cycles are pairwise distinct. Canonical form as for SrPartition.
struct Gsp1 {
  std::vector<std::vector<AgentId>> cycles;

  void canonicalize();
  bool operator==(const Gsp1& other) const { return cycles == other.cycles; }
};

/// The set-function form of a generalised stable partition: per agent the
/// predecessor set P and successor set S, padded to capacity with dummy
/// agents. Dummies never leak into files or matchings; they live in the ids
/// above n_real, c_i of them per agent, in the order produced by
/// augment_with_dummies.
struct Gsp2 {
  int n_real = 0;
  std::vector<int> caps;                    // real agents' capacities
  std::vector<std::vector<AgentId>> succ;   // S(a), indexed over 1..n_aug
  std::vector<std::vector<AgentId>> pred;   // P(a)

  int augmented_count() const { return static_cast<int>(succ.size()); }
  bool is_dummy(AgentId a) const { return a > n_real; }
  /// Owner of a dummy id, and its 1-based index within the owner's dummies.
  AgentId dummy_owner(AgentId d) const;
  int dummy_index(AgentId d) const;
  AgentId dummy_id(AgentId owner, int index) const;  // index 1..c_owner
};

/// Edge weights in {0, 1/2, 1}, split into the half- and full-weighted pair
/// sets. Pairs are stored with the smaller id first, sorted, disjoint.
struct HalfMatching {
  std::vector<AgentPair> half;
  std::vector<AgentPair> full;

  void normalize();
  bool operator==(const HalfMatching& other) const {
    return half == other.half && full == other.full;
  }
};

struct Matching {
  std::vector<AgentPair> pairs;

  void normalize();
  bool operator==(const Matching& other) const { return pairs == other.pairs; }
};

/// Appends c_i capacity-1 dummy agents to every agent's list (the dummies
/// rank their owner first and themselves second). Internal device that makes
/// the set functions total; the result is flagged incomplete.
SfInstance augment_with_dummies(const SfInstance& inst);

Gsp2 gsp2_from_gsp1(const SfInstance& inst, const Gsp1& g1);
Gsp1 gsp1_from_gsp2(const SfInstance& inst, const Gsp2& g2);

HalfMatching half_matching_from_gsp(const Gsp1& g1);
HalfMatching half_matching_from_gsp(const Gsp2& g2);
Gsp2 gsp2_from_half_matching(const SfInstance& inst, const HalfMatching& hm);

Verdict validate_gsp1(const SfInstance& inst, const Gsp1& g1);
Verdict validate_gsp2(const SfInstance& inst, const Gsp2& g2);
Verdict validate_half_matching(const SfInstance& inst, const HalfMatching& hm);
Verdict validate_matching(const SfInstance& inst, const Matching& m);
/// validate_matching under explicit capacities (used by the repair module;
/// capacity 0 bars an agent from matching entirely).
Verdict validate_matching(const SfInstance& inst, const Matching& m,
                          const std::vector<int>& caps);

/// Replaces every even cycle of length >= 4 by the transposition pairing
/// that starts at the cycle's canonical first agent. Odd cycles, fixed
/// points and transpositions pass through unchanged.
Gsp1 reduce_gsp(const SfInstance& inst, const Gsp1& g1);

/// Cycles of odd length >= 3, canonical order. Invariant across all GSPs of
/// the instance.
std::vector<std::vector<AgentId>> odd_cycles(const Gsp1& g1);

struct SolvabilityResult {
  bool solvable = false;
  Matching matching;                              // when solvable
  std::vector<std::vector<AgentId>> certificate;  // odd cycles otherwise
  Gsp1 gsp;                                       // the reduced GSP used
};

/// Computes a GSP, reduces it, and either extracts the stable matching or
/// reports the odd cycles as the unsolvability certificate.
SolvabilityResult decide_solvable(const SfInstance& inst);

/// Per-agent matched value in half-units (2 per full match, 1 per half).
std::vector<int> allocation_vector(const HalfMatching& hm, int n);
std::vector<int> allocation_vector(const SfInstance& inst, const Gsp1& g1);
std::vector<int> allocation_vector(const Gsp2& g2);

/// Matching formed by the transpositions of a reduced GSP (fixed points
/// stripped).
Matching matching_from_reduced_gsp(const Gsp1& g1);

/// Half-matching text format: pair lists under "HALF:" / "FULL:" headers.
std::string format_half_matching(const HalfMatching& hm);
HalfMatching parse_half_matching(const std::string& text);

}  // namespace sf
