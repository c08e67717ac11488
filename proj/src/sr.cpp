#include "sf/sr.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sf {

namespace {

// Doubly-linked preference table with symmetric deletion. Slots are laid out
// per agent in preference order, so slot - offset(agent) recovers the rank.
// held_slot[a] is a's side of the proposal it currently holds, or -1.
class ProposalTable {
 public:
  explicit ProposalTable(const SfInstance& inst) : inst_(inst) {
    const int n = inst.agent_count();
    off_.resize(n + 2, 0);
    for (AgentId a = 1; a <= n; ++a)
      off_[a + 1] = off_[a] + static_cast<int>(inst.preferences(a).size());
    const int m = off_[n + 1];
    partner_.assign(m, 0);
    partner_slot_.assign(m, -1);
    prev_.assign(m, -1);
    next_.assign(m, -1);
    alive_.assign(m, 0);
    head_.assign(n + 1, -1);
    tail_.assign(n + 1, -1);
    size_.assign(n + 1, 0);
    held_slot_.assign(n + 1, -1);
    in_queue_.assign(n + 1, 0);
    frozen_.assign(n + 1, 0);
    stamp_.assign(n + 1, 0);

    for (AgentId a = 1; a <= n; ++a) {
      const auto& list = inst.preferences(a);
      int last = -1;
      for (int p = 0; p < static_cast<int>(list.size()); ++p) {
        const AgentId b = list[p];
        const Rank back = inst.rank_of(b, a);
        if (back.unacceptable()) continue;  // drop one-sided entries
        const int s = off_[a] + p;
        partner_[s] = b;
        partner_slot_[s] = off_[b] + back.value - 1;
        alive_[s] = 1;
        prev_[s] = last;
        if (last >= 0)
          next_[last] = s;
        else
          head_[a] = s;
        last = s;
        ++size_[a];
      }
      tail_[a] = last;
    }
  }

  int agent_count() const { return inst_.agent_count(); }
  int list_size(AgentId a) const { return size_[a]; }
  bool frozen(AgentId a) const { return frozen_[a] != 0; }

  AgentId head_partner(AgentId a) const { return partner_[head_[a]]; }
  AgentId second_partner(AgentId a) const {
    return partner_[next_[head_[a]]];
  }
  AgentId held_partner(AgentId a) const {
    return held_slot_[a] < 0 ? 0 : partner_[held_slot_[a]];
  }

  void push(AgentId a) {
    if (!in_queue_[a] && !frozen_[a]) {
      in_queue_[a] = 1;
      queue_.push_back(a);
    }
  }

  void drain() {
    while (!queue_.empty()) {
      const AgentId x = queue_.back();
      queue_.pop_back();
      in_queue_[x] = 0;
      propose(x);
    }
  }

  // x runs down its list until some agent holds its proposal (or the list is
  // exhausted). Acceptance is by strict preference over the currently held
  // proposer.
  void propose(AgentId x) {
    if (frozen_[x]) return;
    while (head_[x] >= 0) {
      const int s = head_[x];
      const AgentId z = partner_[s];
      const int slot_in_z = partner_slot_[s];
      if (held_slot_[z] == slot_in_z) return;  // already engaged
      if (held_slot_[z] < 0 || slot_in_z < held_slot_[z]) {
        accept(z, slot_in_z);
        return;
      }
      delete_slot(x, s);  // rejected
    }
  }

  // z accepts the proposal stored at slot_in_z: everything it likes less is
  // rejected, symmetric entries included.
  void accept(AgentId z, int slot_in_z) {
    while (tail_[z] != slot_in_z) delete_slot(z, tail_[z]);
    held_slot_[z] = slot_in_z;
  }

  // z accepts x during a rotation elimination.
  void accept_partner(AgentId z, AgentId x) {
    const Rank r = inst_.rank_of(z, x);
    if (r.unacceptable())
      throw std::logic_error("rotation elimination lost a pair");
    const int slot = off_[z] + r.value - 1;
    if (!alive_[slot])
      throw std::logic_error("rotation elimination hit a deleted pair");
    accept(z, slot);
  }

  // Removes a pair given the initiator's side. The initiator is mid-action
  // and never re-queued here; the partner re-proposes if it lost its
  // engagement target.
  void delete_slot(AgentId a, int s) {
    const AgentId b = partner_[s];
    const int s2 = partner_slot_[s];
    unlink(a, s);
    if (held_slot_[a] == s) held_slot_[a] = -1;
    const bool was_head_of_b = head_[b] == s2;
    unlink(b, s2);
    if (held_slot_[b] == s2) held_slot_[b] = -1;
    if (was_head_of_b) push(b);
  }

  // Deletes every remaining pair of the given agents (used when an odd party
  // leaves the table).
  void remove_agents(const std::vector<AgentId>& agents) {
    for (AgentId a : agents) frozen_[a] = 1;
    for (AgentId a : agents) {
      while (head_[a] >= 0) delete_slot(a, head_[a]);
      held_slot_[a] = -1;
    }
  }

  // Walks the rotation chain from x0 and returns the cyclic part as the list
  // of members in chain order.
  std::vector<AgentId> find_rotation(AgentId x0) {
    ++current_stamp_;
    std::vector<AgentId> chain;
    AgentId x = x0;
    while (stamp_[x] != current_stamp_) {
      stamp_[x] = current_stamp_;
      chain.push_back(x);
      if (size_[x] < 2)
        throw std::logic_error("rotation walk reached a settled agent");
      const AgentId y = second_partner(x);
      const AgentId nx = held_partner(y);
      if (nx == 0) throw std::logic_error("rotation walk: unheld agent");
      x = nx;
    }
    auto first = std::find(chain.begin(), chain.end(), x);
    return std::vector<AgentId>(first, chain.end());
  }

  std::set<AgentId> build_active_set() const {
    std::set<AgentId> active;
    for (AgentId a = 1; a <= agent_count(); ++a)
      if (!frozen_[a] && size_[a] >= 2) active.insert(a);
    return active;
  }

 private:
  void unlink(AgentId a, int s) {
    const int p = prev_[s], q = next_[s];
    if (p >= 0)
      next_[p] = q;
    else
      head_[a] = q;
    if (q >= 0)
      prev_[q] = p;
    else
      tail_[a] = p;
    alive_[s] = 0;
    --size_[a];
  }

  const SfInstance& inst_;
  std::vector<int> off_;
  std::vector<AgentId> partner_;
  std::vector<int> partner_slot_, prev_, next_;
  std::vector<char> alive_;
  std::vector<int> head_, tail_, size_, held_slot_;
  std::vector<char> in_queue_, frozen_;
  std::vector<int> stamp_;
  int current_stamp_ = 0;
  std::vector<AgentId> queue_;
};

}  // namespace

void SrPartition::canonicalize() {
  for (auto& cycle : cycles) {
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
  }
  std::sort(cycles.begin(), cycles.end());
}

std::vector<std::vector<AgentId>> SrPartition::odd_cycles() const {
  std::vector<std::vector<AgentId>> odd;
  for (const auto& cycle : cycles)
    if (cycle.size() >= 3 && cycle.size() % 2 == 1) odd.push_back(cycle);
  return odd;
}

SrPartition stable_partition_sr(const SfInstance& inst) {
  const int n = inst.agent_count();
  for (AgentId a = 1; a <= n; ++a)
    if (inst.capacity(a) != 1)
      throw std::invalid_argument("stable_partition_sr needs all caps = 1");

  ProposalTable table(inst);
  for (AgentId a = n; a >= 1; --a) table.push(a);  // low ids propose first
  table.drain();

  std::vector<std::vector<AgentId>> party_cycles;
  auto active = table.build_active_set();
  auto refresh = [&] {
    // Cheap resync; deletions may have settled agents since the last pass.
    for (auto it = active.begin(); it != active.end();) {
      if (table.frozen(*it) || table.list_size(*it) < 2)
        it = active.erase(it);
      else
        ++it;
    }
  };

  while (true) {
    refresh();
    if (active.empty()) break;
    const AgentId start = *active.begin();
    const std::vector<AgentId> members = table.find_rotation(start);
    const size_t k = members.size();

    // Capture each member's second entry before anything moves.
    std::vector<AgentId> targets(k);
    for (size_t i = 0; i < k; ++i)
      targets[i] = table.second_partner(members[i]);

    // A member is "locked" when its list is down to its engagement and its
    // target and the target is itself a member: eliminating would wipe the
    // pair the member must move to. A rotation locked everywhere is an odd
    // party and stays as a cycle of the partition.
    std::vector<AgentId> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    size_t locked = 0;
    for (size_t i = 0; i < k; ++i)
      if (table.list_size(members[i]) == 2 &&
          std::binary_search(sorted.begin(), sorted.end(), targets[i]))
        ++locked;

    if (locked == 0) {
      for (size_t i = 0; i < k; ++i) {
        // Each target upgrades to its rotation partner; the old engagement
        // is dumped by the truncation and re-proposes during the drain.
        table.accept_partner(targets[i], members[i]);
      }
      table.drain();
    } else if (locked == k) {
      // Odd party: the members close a cycle under their first entries.
      if (k % 2 == 0)
        throw std::logic_error("even rotation is fully locked");
      std::vector<AgentId> cycle;
      cycle.reserve(k);
      AgentId a = sorted.front();
      for (size_t i = 0; i < k; ++i) {
        cycle.push_back(a);
        a = table.head_partner(a);
        if (!std::binary_search(sorted.begin(), sorted.end(), a))
          throw std::logic_error("odd party successor left the party");
      }
      std::vector<AgentId> dedup = cycle;
      std::sort(dedup.begin(), dedup.end());
      if (a != cycle.front() || dedup != sorted)
        throw std::logic_error("odd party does not close a cycle");
      table.remove_agents(cycle);
      table.drain();
      party_cycles.push_back(std::move(cycle));
    } else {
      throw std::logic_error("partially locked rotation");
    }
  }

  SrPartition part;
  part.cycles = std::move(party_cycles);
  std::vector<char> done(n + 1, 0);
  for (const auto& cycle : part.cycles)
    for (AgentId a : cycle) done[a] = 1;
  for (AgentId a = 1; a <= n; ++a) {
    if (done[a] || table.frozen(a)) continue;
    if (table.list_size(a) == 0) {
      part.cycles.push_back({a});
      done[a] = 1;
      continue;
    }
    if (table.list_size(a) != 1)
      throw std::logic_error("unsettled agent after phase 2");
    const AgentId b = table.head_partner(a);
    if (table.list_size(b) != 1 || table.head_partner(b) != a)
      throw std::logic_error("asymmetric engagement after phase 2");
    if (a < b) {
      part.cycles.push_back({a, b});
      done[a] = done[b] = 1;
    }
  }
  part.canonicalize();

  Verdict v = verify_stable_partition(inst, part);
  if (!v.ok)
    throw std::logic_error("stable_partition_sr produced an unstable result: " +
                           v.condition + " " + v.detail);
  return part;
}

Verdict verify_stable_partition(const SfInstance& inst,
                                const SrPartition& part) {
  const int n = inst.agent_count();
  std::vector<AgentId> succ(n + 1, 0), pred(n + 1, 0);
  for (const auto& cycle : part.cycles) {
    if (cycle.empty()) return Verdict::fail("structure", "empty cycle");
    for (size_t i = 0; i < cycle.size(); ++i) {
      const AgentId a = cycle[i];
      const AgentId b = cycle[(i + 1) % cycle.size()];
      if (a < 1 || a > n) return Verdict::fail("structure", "unknown agent");
      if (succ[a] != 0)
        return Verdict::fail("structure",
                             "agent " + std::to_string(a) +
                                 " appears in more than one position",
                             {a});
      succ[a] = b;
    }
  }
  for (AgentId a = 1; a <= n; ++a) {
    if (succ[a] == 0)
      return Verdict::fail(
          "structure", "agent " + std::to_string(a) + " missing", {a});
    pred[succ[a]] = a;
  }
  for (AgentId a = 1; a <= n; ++a) {
    if (succ[a] != a && (!inst.acceptable(a, succ[a]) ||
                         !inst.acceptable(succ[a], a)))
      return Verdict::fail("structure",
                           "cycle pairs unacceptable agents " +
                               std::to_string(a) + " and " +
                               std::to_string(succ[a]),
                           {a, succ[a]});
    if (inst.rank_of(a, pred[a]).value < inst.rank_of(a, succ[a]).value)
      return Verdict::fail("T1",
                           "agent " + std::to_string(a) +
                               " prefers predecessor " +
                               std::to_string(pred[a]) + " to successor " +
                               std::to_string(succ[a]),
                           {a});
  }
  for (AgentId i = 1; i <= n; ++i) {
    const int pred_rank = inst.rank_of(i, pred[i]).value;
    for (AgentId j : inst.preferences(i)) {
      if (inst.rank_of(i, j).value >= pred_rank) break;
      if (!inst.acceptable(j, i)) continue;
      if (inst.rank_of(j, i).value < inst.rank_of(j, pred[j]).value)
        return Verdict::fail("T2",
                             "agents " + std::to_string(i) + " and " +
                                 std::to_string(j) +
                                 " prefer each other to their predecessors",
                             {i, j});
    }
  }
  return Verdict::pass();
}

std::string format_partition(const std::vector<std::vector<AgentId>>& cycles) {
  std::ostringstream out;
  for (const auto& cycle : cycles) {
    out << '(';
    for (AgentId a : cycle) out << ' ' << a;
    out << " )\n";
  }
  return out.str();
}

std::vector<std::vector<AgentId>> parse_partition(const std::string& text) {
  std::vector<std::vector<AgentId>> cycles;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string tok;
    std::vector<AgentId> cycle;
    bool open = false, closed = false;
    while (fields >> tok) {
      if (tok == "(") {
        if (open) throw ParseError(lineno, "nested '('");
        open = true;
      } else if (tok == ")") {
        closed = true;
      } else {
        if (!open || closed) throw ParseError(lineno, "agent outside cycle");
        try {
          cycle.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad agent id '" + tok + "'");
        }
      }
    }
    if (!open && cycle.empty() && !closed) continue;  // blank line
    if (!open || !closed || cycle.empty())
      throw ParseError(lineno, "expected '( i1 i2 ... )'");
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

}  // namespace sf
