#pragma once

#include <vector>

#include "sf/gsp.hpp"
#include "sf/instance.hpp"
#include "sf/sr.hpp"

namespace sf {

/// Hard size guards for the exhaustive searches. Defaults match the
/// documented limits; raise them explicitly on beefier machines.
struct OracleLimits {
  int max_matching_edges = 21;       // 2^E subsets
  int max_half_matching_edges = 10;  // 3^E weight functions
  int max_partition_agents = 7;      // n! permutations
};

/// All stable matchings of the instance, by exhaustive search over subsets of
/// mutually acceptable pairs. Throws std::length_error past the size guard.
std::vector<Matching> enumerate_stable_matchings(
    const SfInstance& inst, const OracleLimits& limits = {});

/// All stable half-matchings, by exhaustive search over {0, 1/2, 1}-weight
/// functions on the acceptable pairs.
std::vector<HalfMatching> enumerate_stable_half_matchings(
    const SfInstance& inst, const OracleLimits& limits = {});

/// All stable partitions of a capacity-1 instance, by checking T1/T2 on every
/// permutation of the agents.
std::vector<SrPartition> brute_stable_partition_sr(
    const SfInstance& inst, const OracleLimits& limits = {});

/// Summary used by `verify --oracle`: every listed object has passed the
/// corresponding validator.
struct OracleReport {
  std::vector<Matching> matchings;
  std::vector<HalfMatching> half_matchings;
  bool solvable = false;
  std::vector<std::vector<int>> allocations;  // per half-matching, half-units
  long long min_egalitarian_cost = -1;        // half-units, -1 if none
  int min_regret = -1;
};

OracleReport oracle_report(const SfInstance& inst,
                           const OracleLimits& limits = {});

/// Rank-weighted cost of a half-matching, in half-units (each endpoint of an
/// edge contributes its rank of the partner, weighted by the edge value).
long long egalitarian_cost_half_units(const SfInstance& inst,
                                      const HalfMatching& hm);

/// Worst rank used by any weighted assignment of the half-matching.
int regret_of(const SfInstance& inst, const HalfMatching& hm);

}  // namespace sf
