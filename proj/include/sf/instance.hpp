#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sf/types.hpp"

namespace sf {

/// Thrown by parse_instance with a 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A Stable Fixtures instance: n agents, strict preference lists and integer
/// capacities. Input files must carry complete lists (every other agent
/// appears); instances with shorter, duplicate-free lists are used internally
/// by the reduction pipeline and the roommates engine and are flagged
/// `incomplete`. Immutable after construction.
class SfInstance {
 public:
  SfInstance() = default;
  SfInstance(std::vector<std::vector<AgentId>> prefs, std::vector<int> caps,
             bool incomplete = false);

  int agent_count() const { return n_; }
  bool incomplete() const { return incomplete_; }
  const std::vector<AgentId>& preferences(AgentId i) const {
    return prefs_[i - 1];
  }
  int capacity(AgentId i) const { return caps_[i - 1]; }
  const std::vector<int>& capacities() const { return caps_; }

  /// Rank of j in i's list; rank_of(i, i) is the self sentinel (list length
  /// + 1, i.e. n on complete instances). Agents missing from an incomplete
  /// list get the distinguished unacceptable rank.
  Rank rank_of(AgentId i, AgentId j) const;
  int self_rank(AgentId i) const {
    return static_cast<int>(prefs_[i - 1].size()) + 1;
  }
  bool acceptable(AgentId i, AgentId j) const {
    return i != j && !rank_of(i, j).unacceptable();
  }

  bool operator==(const SfInstance& other) const {
    return n_ == other.n_ && prefs_ == other.prefs_ && caps_ == other.caps_;
  }

 private:
  int n_ = 0;
  bool incomplete_ = false;
  std::vector<std::vector<AgentId>> prefs_;
  std::vector<int> caps_;
  // Dense rank rows for complete instances, per-agent maps otherwise.
  std::vector<int32_t> dense_rank_;
  std::vector<std::unordered_map<AgentId, int>> sparse_rank_;
};

/// Preference system in graphic form: vertices with capacities, and for each
/// vertex its incident edges in strict preference order of the opposite
/// endpoint. No self-loops, no parallel edges.
struct PreferenceGraph {
  std::vector<std::vector<AgentId>> adjacency;  // 1-based via index+1
  std::vector<int> caps;

  int vertex_count() const { return static_cast<int>(adjacency.size()); }
  const std::vector<AgentId>& neighbors(AgentId v) const {
    return adjacency[v - 1];
  }
  int capacity(AgentId v) const { return caps[v - 1]; }
  std::vector<AgentPair> edges() const;
};

SfInstance parse_instance(const std::string& text);
SfInstance parse_instance(std::istream& in);
std::string serialize_instance(const SfInstance& inst);

PreferenceGraph to_graphic(const SfInstance& inst);
SfInstance from_graphic(const PreferenceGraph& g);

/// Deterministic uniform random instance: every preference list is an
/// independent uniformly random permutation of the other agents. Identical
/// (n, caps, seed) arguments reproduce the identical instance on any build.
SfInstance random_instance(int n, int uniform_cap, uint64_t seed);
SfInstance random_instance(int n, const std::vector<int>& caps, uint64_t seed);

/// The pinned 64-bit generator behind all randomness in this project
/// (splitmix64). Bounded draws use unbiased rejection sampling.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform draw from [0, bound), bound >= 1.
  uint64_t bounded(uint64_t bound);

 private:
  uint64_t state_;
};

}  // namespace sf
