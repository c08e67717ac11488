#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sf/instance.hpp"

#ifndef SF_FIXTURE_DIR
#error "SF_FIXTURE_DIR must be defined by the build"
#endif

namespace sf::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(SF_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline SfInstance load_fixture(const std::string& name) {
  return parse_instance(read_file(fixture_path(name)));
}

/// The unsolvable family with k+3 agents and uniform capacity k+1: the last
/// three agents chase each other in a cycle behind the k universally-loved
/// leaders.
inline SfInstance family_instance(int k) {
  const int n = k + 3;
  std::vector<std::vector<AgentId>> prefs(n);
  for (int i = 1; i <= k; ++i) {
    prefs[i - 1] = {k + 1, k + 2, k + 3};
    for (int j = 1; j <= k; ++j)
      if (j != i) prefs[i - 1].push_back(j);
  }
  for (int t = 1; t <= 3; ++t) {
    auto& list = prefs[k + t - 1];
    for (int j = 1; j <= k; ++j) list.push_back(j);
    const int succ = k + 1 + (t % 3);
    const int pred = k + 1 + ((t + 1) % 3);
    list.push_back(succ);
    list.push_back(pred);
  }
  return SfInstance(std::move(prefs), std::vector<int>(n, k + 1));
}

/// Re-labels agents: agent a becomes perm[a-1] (perm is a permutation of
/// 1..n). Used by the invariance tests.
inline SfInstance relabel(const SfInstance& inst,
                          const std::vector<AgentId>& perm) {
  const int n = inst.agent_count();
  std::vector<std::vector<AgentId>> prefs(n);
  std::vector<int> caps(n);
  for (AgentId a = 1; a <= n; ++a) {
    const AgentId na = perm[a - 1];
    caps[na - 1] = inst.capacity(a);
    for (AgentId b : inst.preferences(a)) prefs[na - 1].push_back(perm[b - 1]);
  }
  return SfInstance(std::move(prefs), std::move(caps), inst.incomplete());
}

/// Maps cycles back through the inverse of perm and canonicalizes.
inline std::vector<std::vector<AgentId>> unlabel_cycles(
    std::vector<std::vector<AgentId>> cycles, const std::vector<AgentId>& perm) {
  std::vector<AgentId> inverse(perm.size() + 1);
  for (size_t a = 1; a <= perm.size(); ++a) inverse[perm[a - 1]] = a;
  for (auto& cycle : cycles) {
    for (auto& a : cycle) a = inverse[a];
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace sf::test
