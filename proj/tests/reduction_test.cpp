#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "fixtures.hpp"
#include "sf/gsp.hpp"
#include "sf/oracle.hpp"
#include "sf/reduction.hpp"

using namespace sf;
using sf::test::family_instance;
using sf::test::load_fixture;

TEST_CASE("edge splitting wires the six-agent gadget") {
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  auto [g, map] = split_edges(to_graphic(tri3));
  CHECK(map.edges.size() == 3);
  CHECK(g.vertex_count() == 21);  // 3 + 18 new agents

  // Edges in id order: {1,2} -> 4..9, {1,3} -> 10..15, {2,3} -> 16..21.
  CHECK(g.neighbors(1) == std::vector<AgentId>{4, 10});
  CHECK(g.neighbors(2) == std::vector<AgentId>{16, 7});
  CHECK(g.neighbors(3) == std::vector<AgentId>{13, 19});
  // Gadget-internal pattern for {1,2}.
  CHECK(g.neighbors(4) == std::vector<AgentId>{5, 1, 9});
  CHECK(g.neighbors(5) == std::vector<AgentId>{6, 4});
  CHECK(g.neighbors(6) == std::vector<AgentId>{7, 5});
  CHECK(g.neighbors(7) == std::vector<AgentId>{8, 2, 6});
  CHECK(g.neighbors(8) == std::vector<AgentId>{9, 7});
  CHECK(g.neighbors(9) == std::vector<AgentId>{4, 8});
  for (AgentId a = 4; a <= 21; ++a) CHECK(g.capacity(a) == 1);
  CHECK(g.capacity(1) == 2);

  // Two agents: one edge, eight vertices in total after both splits.
  const SfInstance k2 = random_instance(2, 1, 1);
  auto [ge, me] = split_edges(to_graphic(k2));
  auto [gv, mv] = split_vertices(ge, me);
  CHECK(gv.vertex_count() == 8);
}

TEST_CASE("vertex splitting copies agents in place") {
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  auto [ge, me] = split_edges(to_graphic(tri3));
  auto [gv, mv] = split_vertices(ge, me);
  CHECK(gv.vertex_count() == 24);  // 3n(n-1) + sum of capacities
  CHECK(mv.copies[0] == std::vector<AgentId>{1, 22});
  CHECK(mv.copies[1] == std::vector<AgentId>{2, 23});
  CHECK(mv.copies[2] == std::vector<AgentId>{3, 24});
  // The first attachment agent of edge {1,2} now ranks: the gadget chain,
  // then both copies of agent 1 in order, then its other gadget neighbour.
  CHECK(gv.neighbors(4) == std::vector<AgentId>{5, 1, 22, 9});
  CHECK(gv.neighbors(7) == std::vector<AgentId>{8, 2, 23, 6});
  CHECK(gv.neighbors(22) == gv.neighbors(1));
  for (AgentId a = 1; a <= 24; ++a) CHECK(gv.capacity(a) == 1);

  // Capacity 1 everywhere: splitting is the identity up to naming.
  const SfInstance usr6 = load_fixture("unsolvable_sr6.sf");
  auto [ge2, me2] = split_edges(to_graphic(usr6));
  auto [gv2, mv2] = split_vertices(ge2, me2);
  CHECK(gv2.vertex_count() == ge2.vertex_count());
  for (AgentId a = 1; a <= 6; ++a)
    CHECK(mv2.copies[a - 1] == std::vector<AgentId>{a});

  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const SfInstance inst = random_instance(n, 1 + trial % (n - 1 > 0 ? n - 1 : 1), 50 + trial);
    auto [a, b] = split_edges(to_graphic(inst));
    auto [c, d] = split_vertices(a, b);
    const int cap_sum = std::accumulate(inst.capacities().begin(),
                                        inst.capacities().end(), 0);
    CHECK(c.vertex_count() == 3 * n * (n - 1) + cap_sum);
  }
}

TEST_CASE("lifting a complete matching of the split triangle") {
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  auto [ge, me] = split_edges(to_graphic(tri3));
  auto [gv, map] = split_vertices(ge, me);
  // The complete stable matching highlighted on the split instance.
  HalfMatching red;
  red.full = {{1, 4},  {5, 6},   {7, 23},  {8, 9},   {2, 16},  {17, 18},
              {20, 21}, {19, 3},  {24, 13}, {22, 10}, {14, 15}, {11, 12}};
  red.normalize();
  const HalfMatching lifted = lift_half_matching(map, red);
  CHECK(lifted.half.empty());
  CHECK(lifted.full == std::vector<AgentPair>{{1, 2}, {1, 3}, {2, 3}});

  CHECK(lift_half_matching(map, HalfMatching{}) == HalfMatching{});

  // A copy matched on one side without the mirror weight must be flagged.
  HalfMatching lopsided;
  lopsided.full = {{1, 4}};
  CHECK_THROWS_AS(lift_half_matching(map, lopsided), std::logic_error);
}

TEST_CASE("end-to-end fixtures") {
  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  const GspPipeline pipe = compute_gsp_pipeline(usf5);
  CHECK(pipe.gsp1 == Gsp1{{{1, 2, 3}, {1, 4}, {2, 4}, {3, 5}}});
  CHECK(pipe.lifted ==
        HalfMatching{{{1, 2}, {1, 3}, {2, 3}}, {{1, 4}, {2, 4}, {3, 5}}});

  const SfInstance sf5 = load_fixture("solvable_sf5.sf");
  const Gsp1 g3 = compute_gsp(sf5);
  CHECK(validate_gsp1(sf5, g3).ok);
  CHECK(odd_cycles(g3).empty());

  const SfInstance uniq4 = load_fixture("unique_gsp_sf4.sf");
  CHECK(compute_gsp(uniq4) == Gsp1{{{1}, {1, 4}, {2, 3}}});

  const SfInstance tri9 = load_fixture("triangles_sf9.sf");
  CHECK(odd_cycles(compute_gsp(tri9)) ==
        std::vector<std::vector<AgentId>>{{4, 6, 8}, {5, 7, 9}});

  const SfInstance free5 = load_fixture("free_capacity_sf5.sf");
  const Gsp1 g7 = compute_gsp(free5);
  CHECK(validate_gsp1(free5, g7).ok);
  // Agent 1 keeps all four units free: four fixed points.
  CHECK(std::count(g7.cycles.begin(), g7.cycles.end(),
                   std::vector<AgentId>{1}) == 4);

  CHECK(odd_cycles(compute_gsp(family_instance(2))) ==
        std::vector<std::vector<AgentId>>{{3, 4, 5}});
}

TEST_CASE("random instances satisfy the cycle-form invariants") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    SplitMix64 rng(7000 + trial);
    std::vector<int> caps(n);
    for (auto& c : caps)
      c = 1 + static_cast<int>(rng.bounded(std::min(3, n - 1)));
    const SfInstance inst = random_instance(n, caps, 7000 + trial);
    const GspPipeline pipe = compute_gsp_pipeline(inst);
    CHECK(validate_gsp1(inst, pipe.gsp1).ok);
    CHECK(validate_half_matching(inst, pipe.lifted).ok);

    // Structural consequences: one long cycle per agent at most, no pair
    // adjacent in two different cycles, full matches only as transpositions.
    std::vector<int> long_cycles(n + 1, 0);
    std::map<AgentPair, int> adjacency;
    for (const auto& cycle : pipe.gsp1.cycles) {
      if (cycle.size() > 2)
        for (AgentId a : cycle) ++long_cycles[a];
      if (cycle.size() >= 2)
        for (size_t i = 0; i < cycle.size(); ++i)
          ++adjacency[ordered_pair(cycle[i], cycle[(i + 1) % cycle.size()])];
    }
    for (AgentId a = 1; a <= n; ++a) CHECK(long_cycles[a] <= 1);
    for (const auto& [e, count] : adjacency) {
      CHECK(count <= 2);
      if (count == 2)  // a full match: must be a literal transposition
        CHECK(std::count(pipe.gsp1.cycles.begin(), pipe.gsp1.cycles.end(),
                         std::vector<AgentId>{e.first, e.second}) == 1);
    }

    // Set-function form round-trips, before and after reduction.
    CHECK(gsp1_from_gsp2(inst, gsp2_from_gsp1(inst, pipe.gsp1)) == pipe.gsp1);
    const Gsp1 reduced = reduce_gsp(inst, pipe.gsp1);
    CHECK(validate_gsp1(inst, reduced).ok);
    CHECK(odd_cycles(reduced) == odd_cycles(pipe.gsp1));
    CHECK(allocation_vector(inst, reduced) ==
          allocation_vector(inst, pipe.gsp1));
    CHECK(gsp1_from_gsp2(inst, gsp2_from_gsp1(inst, reduced)) == reduced);
  }
}

TEST_CASE("reduced partitions and stable matchings correspond") {
  int solvable_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 4;  // n <= 6
    SplitMix64 rng(8800 + trial);
    std::vector<int> caps(n);
    for (auto& c : caps)
      c = 1 + static_cast<int>(rng.bounded(std::min(2, n - 1)));
    const SfInstance inst = random_instance(n, caps, 8800 + trial);
    const auto matchings = enumerate_stable_matchings(inst);
    const Gsp1 reduced = reduce_gsp(inst, compute_gsp(inst));
    if (matchings.empty()) {
      CHECK_FALSE(odd_cycles(reduced).empty());
      continue;
    }
    ++solvable_seen;
    // Every stable matching, padded with fixed points, is a reduced GSP.
    for (const auto& m : matchings) {
      Gsp1 padded;
      std::vector<int> deg(n + 1, 0);
      for (auto [i, j] : m.pairs) {
        padded.cycles.push_back({i, j});
        ++deg[i];
        ++deg[j];
      }
      for (AgentId a = 1; a <= n; ++a)
        for (int k = deg[a]; k < inst.capacity(a); ++k)
          padded.cycles.push_back({a});
      padded.canonicalize();
      CHECK(validate_gsp1(inst, padded).ok);
      CHECK(reduce_gsp(inst, padded) == padded);
    }
    // And the computed reduced GSP strips back to one of them.
    const Matching stripped = matching_from_reduced_gsp(reduced);
    CHECK(std::find(matchings.begin(), matchings.end(), stripped) !=
          matchings.end());
  }
  CHECK(solvable_seen > 10);
}

TEST_CASE("layering one-to-one partitions does not reach stability") {
  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");

  // Round one: the capacity-1 sub-instance and its unique partition.
  std::vector<std::vector<AgentId>> prefs1;
  for (AgentId a = 1; a <= 5; ++a) prefs1.push_back(usf5.preferences(a));
  const SfInstance round1(std::move(prefs1), std::vector<int>(5, 1));
  const SrPartition p1 = stable_partition_sr(round1);
  CHECK(p1.cycles == std::vector<std::vector<AgentId>>{{1, 2, 4}, {3, 5}});
  const HalfMatching m1 = half_matching_from_gsp(Gsp1{p1.cycles});

  // Round two: capacity left after round one, fully matched pairs removed.
  std::vector<std::vector<AgentId>> prefs2(5);
  std::vector<int> caps2 = {1, 1, 1, 1, 0};
  for (AgentId a = 1; a <= 5; ++a)
    for (AgentId b : usf5.preferences(a))
      if (!(ordered_pair(a, b) == AgentPair{3, 5}))
        prefs2[a - 1].push_back(b);
  const SfInstance round2(std::move(prefs2), caps2, /*incomplete=*/true);
  const auto matchings = enumerate_stable_matchings(round2);
  REQUIRE(matchings.size() == 1);
  CHECK(matchings[0].pairs == std::vector<AgentPair>{{1, 4}, {2, 3}});

  // Stacking the rounds overfills {1,4}; cap it at a full match as the
  // layering intends, and the result still blocks.
  std::map<AgentPair, int> units;
  for (auto e : m1.half) units[e] += 1;
  for (auto e : m1.full) units[e] += 2;
  for (auto e : matchings[0].pairs) units[e] = std::min(2, units[e] + 2);
  HalfMatching m3;
  for (auto [e, u] : units) (u == 1 ? m3.half : m3.full).push_back(e);
  m3.normalize();
  CHECK_FALSE(validate_half_matching(usf5, m3).ok);

  // The pipeline's result, by contrast, is stable.
  CHECK(validate_half_matching(usf5, compute_gsp_pipeline(usf5).lifted).ok);
}
