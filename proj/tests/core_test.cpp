#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fixtures.hpp"
#include "sf/instance.hpp"

using namespace sf;
using sf::test::load_fixture;

TEST_CASE("parsing the bundled fixtures") {
  const SfInstance sf5 = load_fixture("solvable_sf5.sf");
  CHECK(sf5.agent_count() == 5);
  for (AgentId i = 1; i <= 5; ++i) CHECK(sf5.capacity(i) == 2);
  CHECK(sf5.preferences(1) == std::vector<AgentId>{2, 3, 4, 5});

  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  CHECK(usf5.capacities() == std::vector<int>{2, 2, 2, 2, 1});
  CHECK(usf5.preferences(5) == std::vector<AgentId>{3, 1, 2, 4});
}

TEST_CASE("parse errors carry line numbers") {
  // A single agent cannot have capacity 1 > n-1 = 0 (nor any valid list).
  CHECK_THROWS_AS(parse_instance("1\n1"), ParseError);
  try {
    parse_instance("3\n2 2 3\n2 3 1\n5 1 2\n");
    FAIL("capacity out of range accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_WITH_AS(parse_instance("3\n2 2 2\n2 3 1\n2 1 2\n"),
                       doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance("3\n2 1 3\n2 3 1\n2 1 2\n"),
                       doctest::Contains("itself"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance("3\n2 2 4\n2 3 1\n2 1 2\n"),
                       doctest::Contains("unknown"), ParseError);
  CHECK_THROWS_AS(parse_instance("3\n2 2\n2 3 1\n2 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance(""), ParseError);
}

TEST_CASE("serialization round trips") {
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  CHECK(serialize_instance(tri3) == "3\n2 2 3\n2 3 1\n2 1 2\n");

  const SfInstance uniq4 = load_fixture("unique_gsp_sf4.sf");
  const std::string body = serialize_instance(uniq4);
  CHECK(body.substr(0, 2) == "4\n");
  CHECK(uniq4.capacities() == std::vector<int>{2, 1, 1, 1});

  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const SfInstance inst = random_instance(9, 1 + seed % 8, seed);
    CHECK(parse_instance(serialize_instance(inst)) == inst);
  }
}

TEST_CASE("rank lookups") {
  const SfInstance sr6 = load_fixture("solvable_sr6.sf");
  CHECK(sr6.rank_of(1, 2).value == 1);
  CHECK(sr6.rank_of(1, 5).value == 2);
  for (AgentId i = 1; i <= 6; ++i) CHECK(sr6.rank_of(i, i).value == 6);

  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  CHECK(usf5.rank_of(3, 4).value == 4);
}

TEST_CASE("random instances are deterministic and uniform permutations") {
  CHECK(serialize_instance(random_instance(8, 1, 42)) ==
        serialize_instance(random_instance(8, 1, 42)));
  CHECK(serialize_instance(random_instance(8, 1, 42)) !=
        serialize_instance(random_instance(8, 1, 43)));

  // Only one two-agent instance exists.
  CHECK(serialize_instance(random_instance(2, 1, 7)) == "2\n1 2\n1 1\n");

  for (int n : {2, 3, 5, 16, 33, 64}) {
    for (uint64_t seed : {1ull, 99ull, 0xDEADBEEFull}) {
      const SfInstance inst = random_instance(n, 1, seed);
      for (AgentId i = 1; i <= n; ++i) {
        std::set<AgentId> seen(inst.preferences(i).begin(),
                               inst.preferences(i).end());
        CHECK(static_cast<int>(seen.size()) == n - 1);
        CHECK(seen.count(i) == 0);
      }
    }
  }
  CHECK_THROWS_AS(random_instance(5, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_instance(5, 0, 1), std::invalid_argument);
}

TEST_CASE("graphic form round trips") {
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  const PreferenceGraph g = to_graphic(tri3);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges().size() == 3);
  // Agent 1 ranks the edge to 2 first and the edge to 3
  // second, and so on around the triangle.
  CHECK(g.neighbors(1) == std::vector<AgentId>{2, 3});
  CHECK(g.neighbors(2) == std::vector<AgentId>{3, 1});
  CHECK(g.neighbors(3) == std::vector<AgentId>{1, 2});
  CHECK(from_graphic(g) == tri3);

  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  CHECK(from_graphic(to_graphic(usf5)) == usf5);

  const SfInstance k2 = random_instance(2, 1, 3);
  CHECK(to_graphic(k2).edges() == std::vector<AgentPair>{{1, 2}});
}
