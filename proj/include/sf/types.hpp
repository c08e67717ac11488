#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sf {

/// Agents are numbered 1..n in files and across the whole public API.
using AgentId = int;

/// Position in a preference list, 1 = most preferred. An agent's own rank is
/// the sentinel "one past the end of its list" (n for complete instances),
/// implementing the convention that agents rank themselves last.
struct Rank {
  int value = 0;

  bool unacceptable() const { return value == kUnacceptable; }

  friend bool operator==(Rank a, Rank b) { return a.value == b.value; }
  friend bool operator<(Rank a, Rank b) { return a.value < b.value; }
  friend bool operator<=(Rank a, Rank b) { return a.value <= b.value; }

  static constexpr int kUnacceptable = 1 << 29;
};

/// Outcome of a validator: either ok, or the first violated condition with
/// witness agents and a human-readable description.
struct Verdict {
  bool ok = true;
  std::string condition;  // e.g. "T2", "F3", "G1", "capacity", "blocking-pair"
  std::string detail;
  std::vector<AgentId> witnesses;

  static Verdict pass() { return Verdict{}; }
  static Verdict fail(std::string cond, std::string what,
                      std::vector<AgentId> who = {}) {
    return Verdict{false, std::move(cond), std::move(what), std::move(who)};
  }
  explicit operator bool() const { return ok; }
};

using AgentPair = std::pair<AgentId, AgentId>;

inline AgentPair ordered_pair(AgentId a, AgentId b) {
  return a < b ? AgentPair{a, b} : AgentPair{b, a};
}

}  // namespace sf
