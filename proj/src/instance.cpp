#include "sf/instance.hpp"

#include <algorithm>
#include <sstream>

namespace sf {

namespace {

constexpr int kDenseRankLimit = 256;

void check_instance(const std::vector<std::vector<AgentId>>& prefs,
                    const std::vector<int>& caps, bool incomplete) {
  const int n = static_cast<int>(prefs.size());
  if (n < 1) throw std::invalid_argument("instance needs at least one agent");
  if (caps.size() != prefs.size())
    throw std::invalid_argument("capacity count differs from agent count");
  std::vector<char> seen(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    const auto& list = prefs[i - 1];
    if (!incomplete && static_cast<int>(list.size()) != n - 1)
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  " has an incomplete preference list");
    std::fill(seen.begin(), seen.end(), 0);
    for (AgentId j : list) {
      if (j < 1 || j > n)
        throw std::invalid_argument("agent " + std::to_string(i) +
                                    " ranks unknown agent " +
                                    std::to_string(j));
      if (j == i)
        throw std::invalid_argument("agent " + std::to_string(i) +
                                    " ranks itself");
      if (seen[j])
        throw std::invalid_argument("agent " + std::to_string(i) +
                                    " ranks agent " + std::to_string(j) +
                                    " twice");
      seen[j] = 1;
    }
    if (!incomplete && (caps[i - 1] < 1 || caps[i - 1] > n - 1))
      throw std::invalid_argument(
          "agent " + std::to_string(i) + " capacity " +
          std::to_string(caps[i - 1]) + " outside [1, n-1]");
    if (incomplete && caps[i - 1] < 0)
      throw std::invalid_argument("negative capacity");
  }
}

}  // namespace

SfInstance::SfInstance(std::vector<std::vector<AgentId>> prefs,
                       std::vector<int> caps, bool incomplete)
    : n_(static_cast<int>(prefs.size())),
      incomplete_(incomplete),
      prefs_(std::move(prefs)),
      caps_(std::move(caps)) {
  check_instance(prefs_, caps_, incomplete_);
  if (n_ <= kDenseRankLimit) {
    dense_rank_.assign(static_cast<size_t>(n_) * n_, Rank::kUnacceptable);
    for (int i = 0; i < n_; ++i) {
      const auto& list = prefs_[i];
      for (int r = 0; r < static_cast<int>(list.size()); ++r)
        dense_rank_[static_cast<size_t>(i) * n_ + (list[r] - 1)] = r + 1;
    }
  } else {
    sparse_rank_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const auto& list = prefs_[i];
      sparse_rank_[i].reserve(list.size() * 2);
      for (int r = 0; r < static_cast<int>(list.size()); ++r)
        sparse_rank_[i].emplace(list[r], r + 1);
    }
  }
}

Rank SfInstance::rank_of(AgentId i, AgentId j) const {
  if (i == j) return Rank{self_rank(i)};
  if (!dense_rank_.empty())
    return Rank{dense_rank_[static_cast<size_t>(i - 1) * n_ + (j - 1)]};
  const auto& row = sparse_rank_[i - 1];
  auto it = row.find(j);
  return it == row.end() ? Rank{Rank::kUnacceptable} : Rank{it->second};
}

SfInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

SfInstance parse_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<std::vector<AgentId>> prefs;
  std::vector<int> caps;
  int agent = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    if (n < 0) {
      if (!(fields >> n) || n < 1)
        throw ParseError(lineno, "expected positive agent count");
      std::string rest;
      if (fields >> rest) throw ParseError(lineno, "trailing data after n");
      prefs.resize(n);
      caps.resize(n);
      continue;
    }
    if (agent >= n) throw ParseError(lineno, "more agent lines than n");
    int cap;
    if (!(fields >> cap)) throw ParseError(lineno, "expected capacity");
    if (cap < 1 || cap > n - 1)
      throw ParseError(lineno, "capacity " + std::to_string(cap) +
                                   " outside [1, n-1]");
    std::vector<AgentId> list;
    std::vector<char> seen(n + 1, 0);
    AgentId p;
    while (fields >> p) {
      if (p < 1 || p > n)
        throw ParseError(lineno, "unknown agent id " + std::to_string(p));
      if (p == agent + 1)
        throw ParseError(lineno, "agent lists itself");
      if (seen[p])
        throw ParseError(lineno, "duplicate entry " + std::to_string(p));
      seen[p] = 1;
      list.push_back(p);
    }
    if (fields.bad()) throw ParseError(lineno, "malformed line");
    if (static_cast<int>(list.size()) != n - 1)
      throw ParseError(lineno, "preference list must contain all " +
                                   std::to_string(n - 1) + " other agents");
    caps[agent] = cap;
    prefs[agent] = std::move(list);
    ++agent;
  }
  if (n < 0) throw ParseError(lineno, "empty input");
  if (agent != n)
    throw ParseError(lineno, "expected " + std::to_string(n) +
                                 " agent lines, got " + std::to_string(agent));
  return SfInstance(std::move(prefs), std::move(caps));
}

std::string serialize_instance(const SfInstance& inst) {
  std::ostringstream out;
  out << inst.agent_count() << '\n';
  for (AgentId i = 1; i <= inst.agent_count(); ++i) {
    out << inst.capacity(i);
    for (AgentId j : inst.preferences(i)) out << ' ' << j;
    out << '\n';
  }
  return out.str();
}

std::vector<AgentPair> PreferenceGraph::edges() const {
  std::vector<AgentPair> result;
  for (AgentId v = 1; v <= vertex_count(); ++v)
    for (AgentId u : neighbors(v))
      if (v < u) result.emplace_back(v, u);
  return result;
}

PreferenceGraph to_graphic(const SfInstance& inst) {
  PreferenceGraph g;
  g.caps = inst.capacities();
  g.adjacency.resize(inst.agent_count());
  for (AgentId i = 1; i <= inst.agent_count(); ++i)
    g.adjacency[i - 1] = inst.preferences(i);
  return g;
}

SfInstance from_graphic(const PreferenceGraph& g) {
  const int n = g.vertex_count();
  bool complete = true;
  for (AgentId v = 1; v <= n; ++v) {
    if (static_cast<int>(g.neighbors(v).size()) != n - 1) complete = false;
    for (AgentId u : g.neighbors(v)) {
      if (u == v) throw std::invalid_argument("self-loop in preference graph");
      const auto& back = g.neighbors(u);
      if (std::find(back.begin(), back.end(), v) == back.end())
        throw std::invalid_argument("asymmetric edge in preference graph");
    }
  }
  std::vector<std::vector<AgentId>> prefs(g.adjacency.begin(),
                                          g.adjacency.end());
  return SfInstance(std::move(prefs), g.caps, !complete);
}

uint64_t SplitMix64::bounded(uint64_t bound) {
  // Accept draws below the largest multiple of bound so every residue is
  // equally likely.
  const uint64_t rem = (uint64_t(0) - bound) % bound;  // 2^64 mod bound
  uint64_t r;
  do {
    r = next();
  } while (rem != 0 && r >= uint64_t(0) - rem);
  return r % bound;
}

namespace {

SfInstance random_instance_impl(int n, std::vector<int> caps, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_instance needs n >= 2");
  for (int c : caps)
    if (c < 1 || c > n - 1)
      throw std::invalid_argument("capacity outside [1, n-1]");
  SplitMix64 rng(seed);
  std::vector<std::vector<AgentId>> prefs(n);
  for (int i = 1; i <= n; ++i) {
    auto& list = prefs[i - 1];
    list.reserve(n - 1);
    for (int j = 1; j <= n; ++j)
      if (j != i) list.push_back(j);
    for (size_t k = list.size() - 1; k > 0; --k)
      std::swap(list[k], list[rng.bounded(k + 1)]);
  }
  return SfInstance(std::move(prefs), std::move(caps));
}

}  // namespace

SfInstance random_instance(int n, int uniform_cap, uint64_t seed) {
  return random_instance_impl(n, std::vector<int>(n, uniform_cap), seed);
}

SfInstance random_instance(int n, const std::vector<int>& caps,
                           uint64_t seed) {
  if (static_cast<int>(caps.size()) != n)
    throw std::invalid_argument("capacity list length differs from n");
  return random_instance_impl(n, caps, seed);
}

}  // namespace sf
