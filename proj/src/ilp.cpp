#include "sf/ilp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sf {

RankIndex RankIndex::from_instance(const SfInstance& inst) {
  RankIndex idx;
  idx.by_rank.resize(inst.agent_count());
  for (AgentId i = 1; i <= inst.agent_count(); ++i)
    idx.by_rank[i - 1] = inst.preferences(i);
  return idx;
}

IlpModel::IlpModel(const SfInstance& inst)
    : n_(inst.agent_count()),
      inst_(inst),
      rank_index_(RankIndex::from_instance(inst)) {
  if (inst.incomplete())
    throw std::invalid_argument("ILP model needs complete preference lists");
}

int IlpModel::ordered_index(AgentId i, AgentId j) const {
  return (i - 1) * (n_ - 1) + (j < i ? j - 1 : j - 2);
}

std::string IlpModel::variable_name(int var) const {
  const int block = var / ordered_pair_count();
  const int rest = var % ordered_pair_count();
  const int i = rest / (n_ - 1) + 1;
  int j = rest % (n_ - 1) + 1;
  if (j >= i) ++j;
  static const char* kind[] = {"h", "f", "w"};
  return std::string(kind[block]) + "_" + std::to_string(i) + "_" +
         std::to_string(j);
}

std::vector<LinearConstraint> IlpModel::constraints() const {
  std::vector<LinearConstraint> cs;
  const int n = n_;
  // (2) capacity
  for (AgentId i = 1; i <= n; ++i) {
    LinearConstraint c;
    c.name = "cap_" + std::to_string(i);
    for (AgentId j = 1; j <= n; ++j) {
      if (j == i) continue;
      c.terms.push_back({h_var(i, j), 0.5});
      c.terms.push_back({f_var(i, j), 1.0});
    }
    c.relation = 'L';
    c.rhs = inst_.capacity(i);
    cs.push_back(std::move(c));
  }
  // (3) exclusivity
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j = 1; j <= n; ++j) {
      if (j == i) continue;
      LinearConstraint c;
      c.name = "excl_" + std::to_string(i) + "_" + std::to_string(j);
      c.terms = {{h_var(i, j), 1.0}, {f_var(i, j), 1.0}};
      c.relation = 'L';
      c.rhs = 1;
      cs.push_back(std::move(c));
    }
  // (4)/(5) symmetry
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j = i + 1; j <= n; ++j) {
      LinearConstraint ch;
      ch.name = "symh_" + std::to_string(i) + "_" + std::to_string(j);
      ch.terms = {{h_var(i, j), 1.0}, {h_var(j, i), -1.0}};
      ch.relation = 'E';
      ch.rhs = 0;
      cs.push_back(std::move(ch));
      LinearConstraint cf;
      cf.name = "symf_" + std::to_string(i) + "_" + std::to_string(j);
      cf.terms = {{f_var(i, j), 1.0}, {f_var(j, i), -1.0}};
      cf.relation = 'E';
      cf.rhs = 0;
      cs.push_back(std::move(cf));
    }
  // (6) stability cover
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j = i + 1; j <= n; ++j) {
      LinearConstraint c;
      c.name = "cover_" + std::to_string(i) + "_" + std::to_string(j);
      c.terms = {{f_var(i, j), 1.0}, {w_var(i, j), 1.0}, {w_var(j, i), 1.0}};
      c.relation = 'G';
      c.rhs = 1;
      cs.push_back(std::move(c));
    }
  // (7) saturation linking
  for (AgentId i = 1; i <= n; ++i)
    for (AgentId j = 1; j <= n; ++j) {
      if (j == i) continue;
      LinearConstraint c;
      c.name = "sat_" + std::to_string(i) + "_" + std::to_string(j);
      const int limit = inst_.rank_of(i, j).value;
      for (int r = 1; r <= limit; ++r) {
        const AgentId k = rank_index_.index(i, r);
        c.terms.push_back({h_var(i, k), 0.5});
        c.terms.push_back({f_var(i, k), 1.0});
      }
      c.terms.push_back({w_var(i, j), -static_cast<double>(inst_.capacity(i))});
      c.relation = 'G';
      c.rhs = 0;
      cs.push_back(std::move(c));
    }
  // Regret cutoff, when set: no assignment ranked worse than the cutoff.
  if (regret_cutoff_ > 0 && regret_cutoff_ < n - 1) {
    LinearConstraint c;
    c.name = "regret_cutoff";
    for (AgentId i = 1; i <= n; ++i)
      for (int r = regret_cutoff_ + 1; r <= n - 1; ++r) {
        const AgentId k = rank_index_.index(i, r);
        c.terms.push_back({f_var(i, k), 1.0});
        c.terms.push_back({h_var(i, k), 1.0});
      }
    c.relation = 'E';
    c.rhs = 0;
    cs.push_back(std::move(c));
  }
  for (const auto& e : extra_) cs.push_back(e);
  return cs;
}

std::vector<std::pair<int, double>> IlpModel::objective_terms() const {
  std::vector<std::pair<int, double>> terms;
  switch (objective_) {
    case IlpObjective::min_half_matches:
      for (AgentId i = 1; i <= n_; ++i)
        for (AgentId j = 1; j <= n_; ++j)
          if (j != i) terms.push_back({h_var(i, j), 1.0});
      break;
    case IlpObjective::rank1_max:
      for (AgentId i = 1; i <= n_; ++i) {
        const AgentId k = rank_index_.index(i, 1);
        terms.push_back({f_var(i, k), 1.0});
        terms.push_back({h_var(i, k), 0.5});
      }
      break;
    case IlpObjective::egalitarian:
      for (AgentId i = 1; i <= n_; ++i)
        for (int r = 1; r <= n_ - 1; ++r) {
          const AgentId k = rank_index_.index(i, r);
          terms.push_back({f_var(i, k), static_cast<double>(r)});
          terms.push_back({h_var(i, k), r / 2.0});
        }
      break;
    case IlpObjective::regret_stage2:
      for (AgentId i = 1; i <= n_; ++i) {
        const AgentId k = rank_index_.index(i, stage2_rank_);
        terms.push_back({f_var(i, k), 1.0});
        terms.push_back({h_var(i, k), 0.5});
      }
      break;
  }
  return terms;
}

IlpModel build_base_model(const SfInstance& inst) { return IlpModel(inst); }

IlpModel with_objective(IlpModel model, IlpObjective objective) {
  model.set_objective(objective);
  return model;
}

std::string IlpSolution::objective_str() const {
  if (objective_x2 % 2 == 0) return std::to_string(objective_x2 / 2);
  std::ostringstream out;
  out << (objective_x2 / 2.0);
  return out.str();
}

namespace {

constexpr int kZero = 0, kHalf = 1, kFull = 2;

struct PairRec {
  AgentId i, j;
  int rank_ij, rank_ji;
  uint8_t allowed = 0b111;
  long long cost[3] = {0, 0, 0};  // objective delta (x2, minimisation sign)
};

struct Solver {
  const IlpModel* model;
  const SfInstance* inst;
  int n = 0;
  bool maximise = false;
  std::vector<PairRec> pairs;
  std::vector<std::vector<int>> at;  // per agent, pair ids by the agent's rank
  std::vector<int> state;            // -1 undecided / kZero / kHalf / kFull
  std::vector<int> committed;        // half-units per agent
  std::vector<int> undecided_at;     // count per agent
  long long committed_cost = 0;
  long long optimistic_rest = 0;     // sum of per-pair minimal costs, undecided
  std::vector<long long> min_cost;   // per pair

  // Search controls.
  bool enumerate = false;
  bool stop_requested = false;
  long long nodes = 0;
  long long node_limit = -1;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  bool budget_hit = false;

  bool has_incumbent = false;
  long long best_cost = 0;
  std::vector<int> best_state;
  std::function<bool(const IlpSolution&)> visitor;

  int pair_units(int s) const { return s == kFull ? 2 : (s == kHalf ? 1 : 0); }

  void setup(const IlpModel& m) {
    model = &m;
    inst = &m.instance();
    n = m.agent_count();
    maximise = m.maximise();
    for (AgentId i = 1; i <= n; ++i)
      for (AgentId j = i + 1; j <= n; ++j) {
        PairRec p;
        p.i = i;
        p.j = j;
        p.rank_ij = inst->rank_of(i, j).value;
        p.rank_ji = inst->rank_of(j, i).value;
        pairs.push_back(p);
      }
    std::sort(pairs.begin(), pairs.end(), [](const PairRec& a,
                                             const PairRec& b) {
      const int sa = a.rank_ij + a.rank_ji, sb = b.rank_ij + b.rank_ji;
      return std::tie(sa, a.i, a.j) < std::tie(sb, b.i, b.j);
    });
    at.assign(n + 1, {});
    for (int e = 0; e < static_cast<int>(pairs.size()); ++e) {
      at[pairs[e].i].push_back(e);
      at[pairs[e].j].push_back(e);
    }
    for (AgentId a = 1; a <= n; ++a)
      std::sort(at[a].begin(), at[a].end(), [&](int x, int y) {
        auto rank = [&](int e) {
          return pairs[e].i == a ? pairs[e].rank_ij : pairs[e].rank_ji;
        };
        return rank(x) < rank(y);
      });

    // Objective cost tables (x2 units, minimisation sign).
    const int sign = maximise ? -1 : 1;
    for (auto& p : pairs) {
      auto side = [&](AgentId self, int rank) -> std::pair<long long, long long> {
        // returns (full, half) x2 contribution of this side
        switch (model->objective()) {
          case IlpObjective::min_half_matches:
            return {0, 2};  // h_ij + h_ji counted below per side
          case IlpObjective::rank1_max:
            return rank == 1 ? std::make_pair(2ll, 1ll)
                             : std::make_pair(0ll, 0ll);
          case IlpObjective::egalitarian:
            return {2ll * rank, static_cast<long long>(rank)};
          case IlpObjective::regret_stage2:
            return rank == model->stage2_rank() ? std::make_pair(2ll, 1ll)
                                                : std::make_pair(0ll, 0ll);
        }
        (void)self;
        return {0, 0};
      };
      auto [fi, hi] = side(p.i, p.rank_ij);
      auto [fj, hj] = side(p.j, p.rank_ji);
      if (model->objective() == IlpObjective::min_half_matches) {
        // The base objective counts ordered half variables: 2 per pair.
        fi = fj = 0;
        hi = hj = 2;
      }
      p.cost[kZero] = 0;
      p.cost[kHalf] = sign * (hi + hj);
      p.cost[kFull] = sign * (fi + fj);
    }

    // Regret cutoff: forbid matches ranked worse than the cutoff.
    if (model->regret_cutoff() > 0)
      for (auto& p : pairs)
        if (p.rank_ij > model->regret_cutoff() ||
            p.rank_ji > model->regret_cutoff())
          p.allowed = 1 << kZero;

    // Single-variable extra constraints steer the search directly.
    for (const auto& c : model->extra_constraints()) {
      if (c.terms.size() != 1) continue;
      const auto [var, coeff] = c.terms[0];
      uint8_t ok0 = 0, ok1 = 0;
      auto sat = [&](double lhs) {
        if (c.relation == 'L') return lhs <= c.rhs + 1e-9;
        if (c.relation == 'G') return lhs >= c.rhs - 1e-9;
        return std::abs(lhs - c.rhs) < 1e-9;
      };
      ok0 = sat(0) ? 1 : 0;
      ok1 = sat(coeff) ? 1 : 0;
      const int block = var / model->ordered_pair_count();
      const int rest = var % model->ordered_pair_count();
      const int vi = rest / (n - 1) + 1;
      int vj = rest % (n - 1) + 1;
      if (vj >= vi) ++vj;
      if (block == 2) continue;  // w bounds checked at leaves
      for (auto& p : pairs) {
        if (ordered_pair(vi, vj) != AgentPair{p.i, p.j}) continue;
        const int s = block == 0 ? kHalf : kFull;
        uint8_t mask = p.allowed;
        if (!ok1) mask &= ~(1 << s);
        if (!ok0) mask &= (1 << s);
        p.allowed = mask;
      }
    }

    state.assign(pairs.size(), -1);
    committed.assign(n + 1, 0);
    undecided_at.assign(n + 1, 0);
    for (const auto& p : pairs) {
      ++undecided_at[p.i];
      ++undecided_at[p.j];
    }
    min_cost.assign(pairs.size(), 0);
    optimistic_rest = 0;
    for (size_t e = 0; e < pairs.size(); ++e) {
      long long m = std::numeric_limits<long long>::max();
      for (int s = 0; s < 3; ++s)
        if (pairs[e].allowed & (1 << s)) m = std::min(m, pairs[e].cost[s]);
      if (m == std::numeric_limits<long long>::max()) m = 0;  // infeasible pair
      min_cost[e] = m;
      optimistic_rest += m;
    }
  }

  int rank_of_side(int e, AgentId a) const {
    return pairs[e].i == a ? pairs[e].rank_ij : pairs[e].rank_ji;
  }

  void assign(int e, int s) {
    state[e] = s;
    const int u = pair_units(s);
    committed[pairs[e].i] += u;
    committed[pairs[e].j] += u;
    --undecided_at[pairs[e].i];
    --undecided_at[pairs[e].j];
    committed_cost += pairs[e].cost[s];
    optimistic_rest -= min_cost[e];
  }

  void unassign(int e) {
    const int s = state[e];
    const int u = pair_units(s);
    committed[pairs[e].i] -= u;
    committed[pairs[e].j] -= u;
    ++undecided_at[pairs[e].i];
    ++undecided_at[pairs[e].j];
    committed_cost -= pairs[e].cost[s];
    optimistic_rest += min_cost[e];
    state[e] = -1;
  }

  // Could side a of pair e still reach exact saturation at e's rank?
  bool saturation_possible(int e, AgentId a) const {
    const int cap2 = 2 * inst->capacity(a);
    const int limit = rank_of_side(e, a);
    int prefix = 0, undecided_better = 0;
    for (int f : at[a]) {
      if (rank_of_side(f, a) > limit) break;
      if (state[f] < 0)
        ++undecided_better;
      else
        prefix += pair_units(state[f]);
    }
    const int headroom = cap2 - committed[a];
    return prefix + std::min(2 * undecided_better, headroom) >= cap2;
  }

  bool saturated_exact(int e, AgentId a) const {
    const int cap2 = 2 * inst->capacity(a);
    const int limit = rank_of_side(e, a);
    int prefix = 0;
    for (int f : at[a]) {
      if (rank_of_side(f, a) > limit) break;
      prefix += pair_units(state[f]);
    }
    return prefix == cap2;
  }

  // Forces pairs whose cover constraint can only be met by a full match.
  // Returns false on conflict; forced assignments are appended to `trail`.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int e = 0; e < static_cast<int>(pairs.size()); ++e) {
        if (state[e] == kFull) continue;
        const bool dead_i = !saturation_possible(e, pairs[e].i);
        const bool dead_j = !saturation_possible(e, pairs[e].j);
        if (!dead_i || !dead_j) continue;
        if (state[e] >= 0) return false;  // decided non-full, no cover
        // Must be full.
        if (!(pairs[e].allowed & (1 << kFull))) return false;
        if (committed[pairs[e].i] + 2 > 2 * inst->capacity(pairs[e].i) ||
            committed[pairs[e].j] + 2 > 2 * inst->capacity(pairs[e].j))
          return false;
        assign(e, kFull);
        trail.push_back(e);
        changed = true;
      }
    }
    return true;
  }

  bool leaf_feasible() const {
    for (int e = 0; e < static_cast<int>(pairs.size()); ++e) {
      if (state[e] == kFull) continue;
      if (!saturated_exact(e, pairs[e].i) && !saturated_exact(e, pairs[e].j))
        return false;
    }
    // Extra constraints, with the w indicators at their derived values.
    for (const auto& c : model->extra_constraints()) {
      double lhs = 0;
      for (auto [var, coeff] : c.terms) lhs += coeff * variable_value(var);
      if (c.relation == 'L' && lhs > c.rhs + 1e-9) return false;
      if (c.relation == 'G' && lhs < c.rhs - 1e-9) return false;
      if (c.relation == 'E' && std::abs(lhs - c.rhs) > 1e-9) return false;
    }
    return true;
  }

  double variable_value(int var) const {
    const int block = var / model->ordered_pair_count();
    const int rest = var % model->ordered_pair_count();
    const AgentId i = rest / (n - 1) + 1;
    AgentId j = rest % (n - 1) + 1;
    if (j >= i) ++j;
    int e = -1;
    for (int f : at[i])
      if (pairs[f].i + pairs[f].j - i == j) {
        e = f;
        break;
      }
    if (e < 0) return 0;
    if (block == 0) return state[e] == kHalf ? 1 : 0;
    if (block == 1) return state[e] == kFull ? 1 : 0;
    return saturated_exact(e, i) ? 1 : 0;
  }

  IlpSolution snapshot(const std::vector<int>& st) const {
    IlpSolution sol;
    sol.status = IlpSolution::Status::optimal;
    sol.has_assignment = true;
    for (int e = 0; e < static_cast<int>(pairs.size()); ++e) {
      if (st[e] == kHalf) sol.half.push_back({pairs[e].i, pairs[e].j});
      if (st[e] == kFull) sol.full.push_back({pairs[e].i, pairs[e].j});
    }
    std::sort(sol.half.begin(), sol.half.end());
    std::sort(sol.full.begin(), sol.full.end());
    return sol;
  }

  bool out_of_budget() {
    if (node_limit >= 0 && nodes > node_limit) return true;
    if (has_deadline && (nodes & 1023) == 0 &&
        std::chrono::steady_clock::now() > deadline)
      return true;
    return false;
  }

  void dfs() {
    if (stop_requested) return;
    ++nodes;
    if (out_of_budget()) {
      budget_hit = true;
      stop_requested = true;
      return;
    }
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) unassign(*it);
      return;
    }
    if (!enumerate && has_incumbent &&
        committed_cost + optimistic_rest >= best_cost) {
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) unassign(*it);
      return;
    }
    int branch = -1;
    for (int e = 0; e < static_cast<int>(pairs.size()); ++e)
      if (state[e] < 0) {
        branch = e;
        break;
      }
    if (branch < 0) {
      if (leaf_feasible()) {
        if (enumerate) {
          IlpSolution sol = snapshot(state);
          sol.objective_x2 = maximise ? -committed_cost : committed_cost;
          if (!visitor(sol)) stop_requested = true;
        } else if (!has_incumbent || committed_cost < best_cost) {
          has_incumbent = true;
          best_cost = committed_cost;
          best_state = state;
        }
      }
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) unassign(*it);
      return;
    }
    static const int order[3] = {kFull, kZero, kHalf};
    for (int s : order) {
      if (!(pairs[branch].allowed & (1 << s))) continue;
      const int u = pair_units(s);
      if (committed[pairs[branch].i] + u > 2 * inst->capacity(pairs[branch].i))
        continue;
      if (committed[pairs[branch].j] + u > 2 * inst->capacity(pairs[branch].j))
        continue;
      assign(branch, s);
      dfs();
      unassign(branch);
      if (stop_requested) break;
    }
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) unassign(*it);
  }
};

}  // namespace

IlpSolution solve(const IlpModel& model, const SolveBudget& budget) {
  Solver s;
  s.setup(model);
  s.node_limit = budget.node_limit;
  if (budget.time_limit_s > 0) {
    s.has_deadline = true;
    s.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(budget.time_limit_s));
  }
  s.dfs();
  IlpSolution sol;
  sol.nodes = s.nodes;
  if (!s.has_incumbent) {
    sol.status = IlpSolution::Status::infeasible;
    if (s.budget_hit) sol.status = IlpSolution::Status::bound_limit;
    return sol;
  }
  sol = s.snapshot(s.best_state);
  sol.nodes = s.nodes;
  sol.objective_x2 = s.maximise ? -s.best_cost : s.best_cost;
  sol.status = s.budget_hit ? IlpSolution::Status::bound_limit
                            : IlpSolution::Status::optimal;
  return sol;
}

void for_each_feasible(const IlpModel& model,
                       const std::function<bool(const IlpSolution&)>& visit) {
  Solver s;
  s.setup(model);
  s.enumerate = true;
  s.visitor = visit;
  s.dfs();
}

MinRegretResult solve_min_regret(const SfInstance& inst,
                                 const SolveBudget& budget) {
  const int n = inst.agent_count();
  auto feasible = [&](int r) {
    IlpModel m(inst);
    m.set_regret_cutoff(r);
    bool found = false;
    for_each_feasible(m, [&](const IlpSolution&) {
      found = true;
      return false;
    });
    return found;
  };
  int lo = 1, hi = n - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  if (!feasible(lo))
    throw std::logic_error("min regret: no feasible cutoff found");
  MinRegretResult result;
  result.regret = lo;
  IlpModel m(inst);
  m.set_regret_cutoff(lo);
  m.set_stage2_rank(lo);
  m.set_objective(IlpObjective::regret_stage2);
  result.solution = solve(m, budget);
  return result;
}

namespace {

std::string fmt_coeff(double v) {
  std::ostringstream out;
  if (v == static_cast<long long>(v))
    out << static_cast<long long>(v);
  else
    out << v;
  return out.str();
}

void append_terms(std::ostringstream& out, const IlpModel& model,
                  const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (auto [var, coeff] : terms) {
    if (coeff >= 0 && !first) out << " +";
    if (coeff < 0) out << " -";
    else if (first) out << ' ';
    out << ' ' << fmt_coeff(std::abs(coeff)) << ' '
        << model.variable_name(var);
    first = false;
  }
}

}  // namespace

std::string export_lp(const IlpModel& model) {
  std::ostringstream out;
  out << "\\ stable half-matching model, " << model.agent_count()
      << " agents\n";
  out << (model.maximise() ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  append_terms(out, model, model.objective_terms());
  out << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out << ' ' << c.name << ':';
    append_terms(out, model, c.terms);
    out << ' '
        << (c.relation == 'L' ? "<=" : (c.relation == 'G' ? ">=" : "="))
        << ' ' << fmt_coeff(c.rhs) << '\n';
  }
  out << "Binary\n";
  for (int v = 0; v < model.variable_count(); ++v)
    out << ' ' << model.variable_name(v) << '\n';
  out << "End\n";
  return out.str();
}

HalfMatching solution_to_half_matching(const SfInstance& inst,
                                       const IlpSolution& sol) {
  if (!sol.has_assignment)
    throw std::invalid_argument(
        "solution_to_half_matching: solution carries no assignment");
  HalfMatching hm;
  hm.half = sol.half;
  hm.full = sol.full;
  hm.normalize();
  Verdict v = validate_half_matching(inst, hm);
  if (!v.ok)
    throw std::invalid_argument(
        "solution_to_half_matching: assignment is not stable: " + v.condition +
        " " + v.detail);
  return hm;
}

}  // namespace sf
