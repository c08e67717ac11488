#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "sf/gsp.hpp"
#include "sf/ilp.hpp"
#include "sf/oracle.hpp"
#include "sf/reduction.hpp"

using namespace sf;
using sf::test::load_fixture;

namespace {

// Minimal reader for the files export_lp writes: enough to re-evaluate the
// model independently of the solver.
struct ParsedLp {
  bool maximise = false;
  std::vector<std::pair<std::string, double>> objective;
  struct Row {
    std::vector<std::pair<std::string, double>> terms;
    char rel;
    double rhs;
  };
  std::vector<Row> rows;
  std::vector<std::string> binaries;
};

ParsedLp parse_lp(const std::string& text) {
  ParsedLp lp;
  std::istringstream in(text);
  std::string line;
  enum { none, objective, rows, binaries } section = none;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line == "Minimize" || line == "Maximize") {
      lp.maximise = line == "Maximize";
      section = objective;
      continue;
    }
    if (line == "Subject To") {
      section = rows;
      continue;
    }
    if (line == "Binary") {
      section = binaries;
      continue;
    }
    if (line == "End") break;
    std::istringstream fields(line);
    if (section == binaries) {
      std::string name;
      fields >> name;
      lp.binaries.push_back(name);
      continue;
    }
    std::string label;
    fields >> label;  // "obj:" or "name:"
    REQUIRE(!label.empty());
    REQUIRE(label.back() == ':');
    std::vector<std::pair<std::string, double>> terms;
    double sign = 1;
    std::string tok;
    char rel = 0;
    double rhs = 0;
    while (fields >> tok) {
      if (tok == "+") {
        sign = 1;
      } else if (tok == "-") {
        sign = -1;
      } else if (tok == "<=" || tok == ">=" || tok == "=") {
        rel = tok == "<=" ? 'L' : (tok == ">=" ? 'G' : 'E');
        fields >> rhs;
      } else {
        const double coeff = std::stod(tok);
        std::string name;
        fields >> name;
        terms.push_back({name, sign * coeff});
        sign = 1;
      }
    }
    if (section == objective) {
      lp.objective = terms;
    } else {
      lp.rows.push_back({terms, rel, rhs});
    }
  }
  return lp;
}

}  // namespace

TEST_CASE("base model on the smallest instance") {
  const SfInstance k2 = random_instance(2, 1, 1);
  const IlpSolution sol = solve(build_base_model(k2));
  CHECK(sol.status == IlpSolution::Status::optimal);
  CHECK(sol.objective_x2 == 0);
  CHECK(sol.full == std::vector<AgentPair>{{1, 2}});
  CHECK(sol.half.empty());
}

TEST_CASE("base optima on the fixtures") {
  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  const IlpSolution s4 = solve(build_base_model(usf5));
  CHECK(s4.status == IlpSolution::Status::optimal);
  CHECK(s4.objective_str() == "6");
  CHECK(solution_to_half_matching(usf5, s4) ==
        HalfMatching{{{1, 2}, {1, 3}, {2, 3}}, {{1, 4}, {2, 4}, {3, 5}}});

  const SfInstance sf5 = load_fixture("solvable_sf5.sf");
  const IlpSolution s3 = solve(build_base_model(sf5));
  CHECK(s3.objective_x2 == 0);
  Matching as_matching{s3.full};
  as_matching.normalize();
  CHECK(validate_matching(sf5, as_matching).ok);

  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  const IlpSolution s13 = solve(build_base_model(tri3));
  CHECK(s13.objective_x2 == 0);
  CHECK(s13.full == std::vector<AgentPair>{{1, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("alternative objectives") {
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  const IlpSolution egal13 =
      solve(with_objective(build_base_model(tri3), IlpObjective::egalitarian));
  CHECK(egal13.objective_str() == "9");

  const SfInstance sf5 = load_fixture("solvable_sf5.sf");
  const IlpSolution egal3 =
      solve(with_objective(build_base_model(sf5), IlpObjective::egalitarian));
  CHECK(egal3.objective_str() == "17");
  // The oracle agrees that 17 is minimal across all stable half-matchings.
  CHECK(oracle_report(sf5).min_egalitarian_cost == 34);  // half-units

  const SfInstance k2 = random_instance(2, 1, 9);
  const IlpSolution rank1 =
      solve(with_objective(build_base_model(k2), IlpObjective::rank1_max));
  CHECK(rank1.objective_str() == "2");
}

TEST_CASE("minimum regret") {
  const SfInstance k2 = random_instance(2, 1, 4);
  CHECK(solve_min_regret(k2).regret == 1);

  const SfInstance sr6 = load_fixture("solvable_sr6.sf");
  const MinRegretResult r1 = solve_min_regret(sr6);
  CHECK(r1.regret == 4);
  // Independent route: all stable partitions, each read as a half-matching.
  int oracle_best = sr6.agent_count();
  for (const auto& p : brute_stable_partition_sr(sr6))
    oracle_best = std::min(
        oracle_best, regret_of(sr6, half_matching_from_gsp(Gsp1{p.cycles})));
  CHECK(oracle_best == 4);

  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  const MinRegretResult r4 = solve_min_regret(usf5);
  CHECK(r4.regret == 3);
  int oracle4 = usf5.agent_count();
  for (const auto& hm : enumerate_stable_half_matchings(usf5))
    oracle4 = std::min(oracle4, regret_of(usf5, hm));
  CHECK(oracle4 == 3);
  // Stage two respects the cutoff.
  const HalfMatching hm = solution_to_half_matching(usf5, r4.solution);
  CHECK(regret_of(usf5, hm) <= 3);

  // Random instances agree with the oracle's minimum over all stable
  // half-matchings.
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    SplitMix64 rng(1500 + trial);
    std::vector<int> caps(n);
    for (auto& c : caps)
      c = 1 + static_cast<int>(rng.bounded(std::min(2, n - 1)));
    const SfInstance inst = random_instance(n, caps, 1500 + trial);
    int oracle_regret = n;
    for (const auto& h : enumerate_stable_half_matchings(inst))
      oracle_regret = std::min(oracle_regret, regret_of(inst, h));
    CHECK(solve_min_regret(inst).regret == oracle_regret);
  }
}

TEST_CASE("custom bounds can make the model infeasible") {
  const SfInstance k2 = random_instance(2, 1, 2);
  IlpModel m = build_base_model(k2);
  LinearConstraint up;
  up.name = "force_up";
  up.terms = {{m.h_var(1, 2), 1.0}};
  up.relation = 'G';
  up.rhs = 1;
  LinearConstraint down;
  down.name = "force_down";
  down.terms = {{m.h_var(1, 2), 1.0}};
  down.relation = 'L';
  down.rhs = 0;
  m.add_constraint(up);
  m.add_constraint(down);
  CHECK(solve(m).status == IlpSolution::Status::infeasible);
}

TEST_CASE("every feasible assignment is a stable half-matching and back") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    SplitMix64 rng(400 + trial);
    std::vector<int> caps(n);
    for (auto& c : caps)
      c = 1 + static_cast<int>(rng.bounded(std::min(2, n - 1)));
    const SfInstance inst = random_instance(n, caps, 600 + trial);
    std::set<std::pair<std::vector<AgentPair>, std::vector<AgentPair>>> found;
    for_each_feasible(build_base_model(inst), [&](const IlpSolution& sol) {
      found.insert({sol.half, sol.full});
      return true;
    });
    std::set<std::pair<std::vector<AgentPair>, std::vector<AgentPair>>> oracle;
    for (const auto& hm : enumerate_stable_half_matchings(inst))
      oracle.insert({hm.half, hm.full});
    CHECK(found == oracle);
  }
}

TEST_CASE("base optimum equals the invariant odd-cycle load") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + trial % 5;  // up to n = 8
    SplitMix64 rng(3200 + trial);
    std::vector<int> caps(n);
    for (auto& c : caps)
      c = 1 + static_cast<int>(rng.bounded(std::min(3, n - 1)));
    const SfInstance inst = random_instance(n, caps, 80 + trial);
    int odd_agents = 0;
    for (const auto& cycle : odd_cycles(compute_gsp(inst)))
      odd_agents += static_cast<int>(cycle.size());
    const IlpSolution sol = solve(build_base_model(inst));
    REQUIRE(sol.status == IlpSolution::Status::optimal);
    CHECK(sol.objective_x2 == 2 * (2 * odd_agents));
    CHECK(validate_half_matching(inst, solution_to_half_matching(inst, sol))
              .ok);
  }
}

TEST_CASE("optima match the oracle under every objective") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + trial % 3;
    SplitMix64 rng(2700 + trial);
    std::vector<int> caps(n);
    for (auto& c : caps)
      c = 1 + static_cast<int>(rng.bounded(std::min(2, n - 1)));
    const SfInstance inst = random_instance(n, caps, 2700 + trial);
    const auto hms = enumerate_stable_half_matchings(inst);
    REQUIRE(!hms.empty());

    long long best_base = 1 << 20, best_egal = 1 << 20, best_rank1 = -1;
    for (const auto& hm : hms) {
      best_base =
          std::min(best_base, 4ll * static_cast<long long>(hm.half.size()));
      best_egal = std::min(best_egal, egalitarian_cost_half_units(inst, hm));
      long long rank1 = 0;
      for (auto [i, j] : hm.half) {
        if (inst.rank_of(i, j).value == 1) rank1 += 1;
        if (inst.rank_of(j, i).value == 1) rank1 += 1;
      }
      for (auto [i, j] : hm.full) {
        if (inst.rank_of(i, j).value == 1) rank1 += 2;
        if (inst.rank_of(j, i).value == 1) rank1 += 2;
      }
      best_rank1 = std::max(best_rank1, rank1);
    }

    CHECK(solve(build_base_model(inst)).objective_x2 == best_base);
    CHECK(solve(with_objective(build_base_model(inst),
                               IlpObjective::egalitarian))
              .objective_x2 == best_egal);
    CHECK(solve(with_objective(build_base_model(inst),
                               IlpObjective::rank1_max))
              .objective_x2 == best_rank1);
  }
}

TEST_CASE("budget limits are honest") {
  const SfInstance inst = random_instance(8, 3, 11);
  SolveBudget tiny;
  tiny.node_limit = 3;
  const IlpSolution sol = solve(build_base_model(inst), tiny);
  CHECK(sol.status == IlpSolution::Status::bound_limit);
}

TEST_CASE("LP export") {
  const SfInstance k2 = random_instance(2, 1, 1);
  const std::string small = export_lp(build_base_model(k2));
  CHECK(small.find("h_1_2") != std::string::npos);
  CHECK(small.find("w_2_1") != std::string::npos);
  CHECK(small == export_lp(build_base_model(k2)));  // deterministic

  const SfInstance usf5 = load_fixture("unsolvable_sf5.sf");
  const ParsedLp lp4 = parse_lp(export_lp(build_base_model(usf5)));
  int h = 0, f = 0, w = 0;
  for (const auto& name : lp4.binaries) {
    if (name[0] == 'h') ++h;
    if (name[0] == 'f') ++f;
    if (name[0] == 'w') ++w;
  }
  CHECK(h + f == 2 * (5 * 4));
  CHECK(w == 20);

  // Re-importing the file and solving it by exhaustion reproduces the
  // built-in optimum (three agents keep that tractable).
  const SfInstance tri3 = load_fixture("triangle_sf3.sf");
  IlpModel egal = with_objective(build_base_model(tri3),
                                 IlpObjective::egalitarian);
  const ParsedLp lp = parse_lp(export_lp(egal));
  REQUIRE(lp.binaries.size() == 18);
  std::map<std::string, int> var_index;
  for (int i = 0; i < 18; ++i) var_index[lp.binaries[i]] = i;
  double best = 1e18;
  for (unsigned mask = 0; mask < (1u << 18); ++mask) {
    auto value = [&](const std::string& name) {
      return (mask >> var_index.at(name)) & 1u ? 1.0 : 0.0;
    };
    bool ok = true;
    for (const auto& row : lp.rows) {
      double lhs = 0;
      for (const auto& [name, coeff] : row.terms) lhs += coeff * value(name);
      if (row.rel == 'L' && lhs > row.rhs + 1e-9) ok = false;
      if (row.rel == 'G' && lhs < row.rhs - 1e-9) ok = false;
      if (row.rel == 'E' && std::abs(lhs - row.rhs) > 1e-9) ok = false;
      if (!ok) break;
    }
    if (!ok) continue;
    double obj = 0;
    for (const auto& [name, coeff] : lp.objective) obj += coeff * value(name);
    best = std::min(best, obj);
  }
  CHECK(best == 9.0);
  CHECK(solve(egal).objective_str() == "9");
}
