#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sf/gsp.hpp"
#include "sf/instance.hpp"

namespace sf {

/// index_i(r): the agent that a_i ranks at position r (1-based), per agent a
/// bijection between ranks 1..n-1 and the other agents.
struct RankIndex {
  std::vector<std::vector<AgentId>> by_rank;

  static RankIndex from_instance(const SfInstance& inst);
  AgentId index(AgentId i, int r) const { return by_rank[i - 1][r - 1]; }
};

enum class IlpObjective {
  min_half_matches,  // the base objective: minimise ordered half-match count
  rank1_max,         // maximise first-choice assignment value
  egalitarian,       // minimise rank-weighted assignment cost
  regret_stage2,     // minimise value assigned at the regret rank
};

struct LinearConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  char relation = 'L';                        // 'L' <=, 'G' >=, 'E' ==
  double rhs = 0;
};

/// The half-matching model: binary h/f/w variables over ordered pairs with
/// the capacity, exclusivity, symmetry, stability-cover and saturation
/// constraint families, one objective, and an optional regret cutoff that
/// zeroes every assignment ranked worse than the cutoff by either side.
class IlpModel {
 public:
  IlpModel() = default;
  explicit IlpModel(const SfInstance& inst);

  int agent_count() const { return n_; }
  const SfInstance& instance() const { return inst_; }
  const RankIndex& rank_index() const { return rank_index_; }
  IlpObjective objective() const { return objective_; }
  int regret_cutoff() const { return regret_cutoff_; }
  int stage2_rank() const { return stage2_rank_; }

  void set_objective(IlpObjective obj) { objective_ = obj; }
  void set_regret_cutoff(int r) { regret_cutoff_ = r; }
  void set_stage2_rank(int r) { stage2_rank_ = r; }

  // Ordered-pair variable registry: h, f, then w blocks.
  int ordered_pair_count() const { return n_ * (n_ - 1); }
  int variable_count() const { return 3 * ordered_pair_count(); }
  int ordered_index(AgentId i, AgentId j) const;
  int h_var(AgentId i, AgentId j) const { return ordered_index(i, j); }
  int f_var(AgentId i, AgentId j) const {
    return ordered_pair_count() + ordered_index(i, j);
  }
  int w_var(AgentId i, AgentId j) const {
    return 2 * ordered_pair_count() + ordered_index(i, j);
  }
  std::string variable_name(int var) const;

  /// The instantiated constraint families, in deterministic order.
  std::vector<LinearConstraint> constraints() const;
  /// Objective terms (variable, coefficient); minimise unless rank1_max.
  std::vector<std::pair<int, double>> objective_terms() const;
  bool maximise() const { return objective_ == IlpObjective::rank1_max; }

  /// Extra constraints appended verbatim (single-variable bounds also steer
  /// the built-in solver; everything else is enforced at solution leaves).
  void add_constraint(LinearConstraint c) { extra_.push_back(std::move(c)); }
  const std::vector<LinearConstraint>& extra_constraints() const {
    return extra_;
  }

 private:
  int n_ = 0;
  SfInstance inst_;
  RankIndex rank_index_;
  IlpObjective objective_ = IlpObjective::min_half_matches;
  int regret_cutoff_ = 0;  // 0 = no cutoff
  int stage2_rank_ = 0;
  std::vector<LinearConstraint> extra_;
};

IlpModel build_base_model(const SfInstance& inst);
IlpModel with_objective(IlpModel model, IlpObjective objective);

struct SolveBudget {
  long long node_limit = -1;   // < 0: unlimited
  double time_limit_s = -1.0;  // < 0: unlimited
};

struct IlpSolution {
  enum class Status { optimal, infeasible, bound_limit };
  Status status = Status::infeasible;
  bool has_assignment = false;  // bound_limit may run out before any leaf
  long long objective_x2 = 0;   // objective value scaled by 2
  std::vector<AgentPair> half, full;
  long long nodes = 0;

  std::string objective_str() const;
};

/// Exact depth-first branch and bound over the pair states (unmatched, half,
/// full); the w indicators are derived, taking their maximal feasible values.
/// Returns the proven optimum, or bound_limit with the incumbent when the
/// budget runs out.
IlpSolution solve(const IlpModel& model, const SolveBudget& budget = {});

/// Full search without objective pruning; the callback sees every feasible
/// assignment (projected to its half/full sets) once. Return false to stop.
void for_each_feasible(const IlpModel& model,
                       const std::function<bool(const IlpSolution&)>& visit);

/// Two-step minimum regret: a feasibility sweep finds the smallest rank
/// cutoff r admitting a stable half-matching, then the value assigned at
/// rank r is minimised subject to that cutoff.
struct MinRegretResult {
  int regret = 0;
  IlpSolution solution;
};
MinRegretResult solve_min_regret(const SfInstance& inst,
                                 const SolveBudget& budget = {});

/// Textual LP rendering of the model (CPLEX LP format, deterministic order).
std::string export_lp(const IlpModel& model);

/// Converts a feasible solution into a half-matching and validates it.
HalfMatching solution_to_half_matching(const SfInstance& inst,
                                       const IlpSolution& sol);

}  // namespace sf
