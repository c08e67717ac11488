// sfx: stable-fixtures toolkit. Computes generalised stable partitions,
// decides solvability, repairs capacities, runs the ILP models and the
// random-instance experiment grid.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "sf/experiment.hpp"
#include "sf/gsp.hpp"
#include "sf/ilp.hpp"
#include "sf/instance.hpp"
#include "sf/near_feasible.hpp"
#include "sf/oracle.hpp"
#include "sf/reduction.hpp"
#include "sf/sr.hpp"

namespace {

using nlohmann::json;
using namespace sf;

constexpr int kExitError = 1;
constexpr int kExitUnsolvable = 2;

SfInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_instance(in);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string format_pairs(const std::vector<AgentPair>& pairs) {
  std::ostringstream out;
  for (auto [i, j] : pairs) out << i << ' ' << j << '\n';
  return out.str();
}

json cycles_json(const std::vector<std::vector<AgentId>>& cycles) {
  json arr = json::array();
  for (const auto& c : cycles) arr.push_back(c);
  return arr;
}

json pairs_json(const std::vector<AgentPair>& pairs) {
  json arr = json::array();
  for (auto [i, j] : pairs) arr.push_back(json::array({i, j}));
  return arr;
}

json half_matching_json(const HalfMatching& hm) {
  return json{{"half", pairs_json(hm.half)}, {"full", pairs_json(hm.full)}};
}

json allocation_json(const std::vector<int>& half_units) {
  json arr = json::array();
  for (int hu : half_units) arr.push_back(hu / 2.0);
  return arr;
}

int run_gen(int n, const std::string& cap_spec, uint64_t seed,
            const std::string& out_path) {
  SfInstance inst = [&] {
    if (cap_spec.find(',') == std::string::npos)
      return random_instance(n, std::stoi(cap_spec), seed);
    std::vector<int> caps;
    std::istringstream fields(cap_spec);
    std::string tok;
    while (std::getline(fields, tok, ',')) caps.push_back(std::stoi(tok));
    return random_instance(n, caps, seed);
  }();
  write_output(out_path, serialize_instance(inst));
  return 0;
}

int run_gsp(const std::string& path, bool reduced, bool want_half,
            bool as_json, const std::string& out_path,
            const std::string& dump_dir) {
  const SfInstance inst = load_instance(path);
  const GspPipeline pipe = compute_gsp_pipeline(inst);
  Gsp1 gsp = reduced ? reduce_gsp(inst, pipe.gsp1) : pipe.gsp1;

  if (!dump_dir.empty()) {
    std::filesystem::create_directories(dump_dir);
    auto dump = [&](const std::string& name, const std::string& text) {
      std::ofstream out(dump_dir + "/" + name);
      out << text;
    };
    // Intermediate instances may carry incomplete lists; the files are for
    // inspection, not for feeding back into the parser.
    dump("1-edge-split.sf", serialize_instance(from_graphic(pipe.edge_split)));
    dump("2-vertex-split.sf", serialize_instance(pipe.sr_instance));
    dump("3-sr-partition.txt", format_partition(pipe.sr_partition.cycles));
    dump("4-sr-half-matching.txt", format_half_matching(pipe.sr_half));
    dump("5-lifted-half-matching.txt", format_half_matching(pipe.lifted));
  }

  if (as_json) {
    json out{{"cycles", cycles_json(gsp.cycles)},
             {"odd_cycles", cycles_json(odd_cycles(gsp))},
             {"half_matching", half_matching_json(half_matching_from_gsp(gsp))},
             {"allocation", allocation_json(allocation_vector(inst, gsp))},
             {"reduced", reduced}};
    write_output(out_path, out.dump(2) + "\n");
  } else if (want_half) {
    write_output(out_path, format_half_matching(half_matching_from_gsp(gsp)));
  } else {
    write_output(out_path, format_partition(gsp.cycles));
  }
  return 0;
}

int run_solve(const std::string& path, bool as_json,
              const std::string& out_path) {
  const SfInstance inst = load_instance(path);
  const SolvabilityResult result = decide_solvable(inst);
  if (as_json) {
    json out{{"solvable", result.solvable}};
    if (result.solvable)
      out["matching"] = pairs_json(result.matching.pairs);
    else
      out["odd_cycles"] = cycles_json(result.certificate);
    write_output(out_path, out.dump(2) + "\n");
  } else if (result.solvable) {
    write_output(out_path, "MATCHING:\n" + format_pairs(result.matching.pairs));
  } else {
    write_output(out_path,
                 "UNSOLVABLE\nODD CYCLES:\n" +
                     format_partition(result.certificate));
  }
  return result.solvable ? 0 : kExitUnsolvable;
}

int run_near_feasible(const std::string& path, const std::string& direction,
                      bool as_json, const std::string& out_path) {
  const SfInstance inst = load_instance(path);
  const Gsp1 gsp = compute_gsp(inst);
  RepairDirection dir = RepairDirection::alternate;
  if (direction == "increase") dir = RepairDirection::increase_only;
  if (direction == "decrease") dir = RepairDirection::decrease_only;
  const RepairResult r = near_feasible_directed(inst, gsp, dir);

  if (as_json) {
    json modified = json::array();
    for (auto [a, d] : r.modified)
      modified.push_back(json{{"agent", a}, {"change", d}});
    json out{{"new_caps", r.new_caps},
             {"modified", modified},
             {"matching", pairs_json(r.matching.pairs)},
             {"total_change", r.total_change()}};
    write_output(out_path, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream out;
  out << "CAPS:";
  for (int c : r.new_caps) out << ' ' << c;
  out << "\nMODIFIED:";
  for (auto [a, d] : r.modified)
    out << ' ' << a << (d > 0 ? ":+1" : ":-1");
  out << "\nMATCHING:\n" << format_pairs(r.matching.pairs);
  write_output(out_path, out.str());
  return 0;
}

int run_ilp(const std::string& path, const std::string& objective,
            const std::string& export_path, long long node_limit,
            double time_limit, bool as_json, const std::string& out_path) {
  const SfInstance inst = load_instance(path);
  SolveBudget budget;
  budget.node_limit = node_limit;
  budget.time_limit_s = time_limit;

  int regret = 0;
  IlpModel model = build_base_model(inst);
  if (objective == "rank1")
    model.set_objective(IlpObjective::rank1_max);
  else if (objective == "egal")
    model.set_objective(IlpObjective::egalitarian);

  IlpSolution sol;
  if (objective == "regret") {
    const MinRegretResult r = solve_min_regret(inst, budget);
    regret = r.regret;
    sol = r.solution;
    model.set_regret_cutoff(regret);
    model.set_stage2_rank(regret);
    model.set_objective(IlpObjective::regret_stage2);
  } else {
    sol = solve(model, budget);
  }
  if (!export_path.empty()) write_output(export_path, export_lp(model));

  const char* status = sol.status == IlpSolution::Status::optimal
                           ? "optimal"
                           : (sol.status == IlpSolution::Status::infeasible
                                  ? "infeasible"
                                  : "bound-limit");
  if (as_json) {
    json out{{"status", status}, {"objective", sol.objective_str()},
             {"nodes", sol.nodes}};
    if (objective == "regret") out["regret"] = regret;
    if (sol.has_assignment)
      out["half_matching"] =
          half_matching_json(solution_to_half_matching(inst, sol));
    write_output(out_path, out.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "status: " << status << '\n';
    if (objective == "regret") out << "regret: " << regret << '\n';
    if (sol.has_assignment) {
      out << "objective: " << sol.objective_str() << '\n';
      out << format_half_matching(solution_to_half_matching(inst, sol));
    }
    write_output(out_path, out.str());
  }
  return sol.status == IlpSolution::Status::infeasible ? kExitError : 0;
}

int run_verify(const std::string& path, const std::string& gsp_path,
               const std::string& half_path, const std::string& matching_path,
               bool oracle, int max_half_edges, bool as_json,
               const std::string& out_path) {
  const SfInstance inst = load_instance(path);
  bool all_ok = true;
  json report = json::object();
  std::ostringstream text;
  auto note = [&](const std::string& key, const Verdict& v,
                  const std::string& extra = "") {
    all_ok &= v.ok;
    report[key] = v.ok ? json{{"ok", true}}
                       : json{{"ok", false},
                              {"condition", v.condition},
                              {"detail", v.detail},
                              {"witnesses", v.witnesses}};
    text << key << ": " << (v.ok ? "ok" : v.condition + " " + v.detail)
         << extra << '\n';
  };

  if (!gsp_path.empty()) {
    Gsp1 g{parse_partition(read_file(gsp_path))};
    note("gsp", validate_gsp1(inst, g));
  }
  if (!half_path.empty())
    note("half_matching",
         validate_half_matching(inst, parse_half_matching(read_file(half_path))));
  if (!matching_path.empty()) {
    Matching m;
    for (const auto& cycle : parse_partition(read_file(matching_path))) {
      if (cycle.size() != 2)
        throw std::runtime_error("matching file must contain pairs");
      m.pairs.push_back(ordered_pair(cycle[0], cycle[1]));
    }
    m.normalize();
    note("matching", validate_matching(inst, m));
  }

  // Self-checks on the computed structures.
  const GspPipeline pipe = compute_gsp_pipeline(inst);
  note("computed_gsp", validate_gsp1(inst, pipe.gsp1));
  note("computed_half_matching", validate_half_matching(inst, pipe.lifted));

  if (oracle) {
    OracleLimits limits;
    limits.max_half_matching_edges = max_half_edges;
    try {
      const auto matchings = enumerate_stable_matchings(inst, limits);
      const bool solvable = decide_solvable(inst).solvable;
      const bool agrees = solvable == !matchings.empty();
      all_ok &= agrees;
      report["oracle"] = {{"ok", agrees},
                          {"stable_matchings", matchings.size()},
                          {"solvable", solvable}};
      text << "oracle: " << (agrees ? "ok" : "DISAGREES") << " ("
           << matchings.size() << " stable matchings)\n";
      if (static_cast<int>(to_graphic(inst).edges().size()) <=
          limits.max_half_matching_edges) {
        const auto hms = enumerate_stable_half_matchings(inst, limits);
        bool invariant = true;
        for (const auto& hm : hms)
          invariant &= allocation_vector(hm, inst.agent_count()) ==
                       allocation_vector(inst, pipe.gsp1);
        all_ok &= invariant;
        report["oracle"]["half_matchings"] = hms.size();
        report["oracle"]["allocation_invariant"] = invariant;
        text << "oracle: allocation invariant "
             << (invariant ? "holds" : "VIOLATED") << " across " << hms.size()
             << " half-matchings\n";
      }
    } catch (const std::length_error& e) {
      report["oracle"] = {{"skipped", true}, {"reason", e.what()}};
      text << "oracle: skipped (" << e.what() << ")\n";
    }
  }

  report["ok"] = all_ok;
  if (as_json)
    write_output(out_path, report.dump(2) + "\n");
  else
    write_output(out_path, text.str() + (all_ok ? "ok\n" : "FAILED\n"));
  return all_ok ? 0 : kExitError;
}

int run_experiment_cmd(int n_min, int n_max, int n_step, int samples,
                       uint64_t seed, const std::vector<std::string>& caps,
                       int threads, bool pivot, bool verbose,
                       const std::string& verbose_path,
                       const std::string& out_path, bool as_json) {
  ExperimentConfig cfg;
  for (int n = n_min; n <= n_max; n += n_step) cfg.n_values.push_back(n);
  cfg.cap_labels = caps.empty() ? default_cap_labels() : caps;
  cfg.samples = samples;
  cfg.seed_base = seed;
  cfg.threads = threads;
  cfg.verbose = verbose;

  std::ofstream verbose_file;
  std::ostream* sink = nullptr;
  if (verbose) {
    if (verbose_path.empty() || verbose_path == "-") {
      sink = &std::cerr;
    } else {
      verbose_file.open(verbose_path);
      if (!verbose_file)
        throw std::runtime_error("cannot write " + verbose_path);
      sink = &verbose_file;
    }
    *sink << "n,cap_label,cap_value,seed,solvable,odd_cycles,agents_in_odd\n";
  }

  const auto cells = run_experiment(cfg, sink);
  if (as_json) {
    json arr = json::array();
    for (const auto& c : cells)
      arr.push_back(json{{"n", c.n},
                         {"cap_label", c.cap_label},
                         {"cap_value", c.cap_value},
                         {"samples", c.samples},
                         {"ratio_solvable", c.ratio_solvable},
                         {"avg_odd_cycles", c.avg_odd_cycles},
                         {"avg_agents_in_odd", c.avg_agents_in_odd},
                         {"avg_base_objective", c.avg_base_objective},
                         {"total_ms", c.total_ms},
                         {"seed_base", c.seed_base}});
    write_output(out_path, arr.dump(2) + "\n");
  } else {
    write_output(out_path,
                 pivot ? experiment_csv_pivot(cells) : experiment_csv(cells));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable-fixtures toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int gen_n = 8;
  std::string gen_caps = "1";
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("-n,--agents", gen_n, "agent count")->required();
  gen->add_option("-c,--cap", gen_caps,
                  "uniform capacity or comma-separated per-agent list");
  gen->add_option("-s,--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  // gsp
  auto* gsp = app.add_subcommand("gsp", "compute a generalised stable partition");
  std::string gsp_file, gsp_out, gsp_dump;
  bool gsp_reduced = false, gsp_half = false, gsp_json = false;
  gsp->add_option("instance", gsp_file, "instance file")->required();
  gsp->add_flag("--reduced", gsp_reduced,
                "decompose even cycles into transpositions");
  gsp->add_flag("--half", gsp_half, "print the half-matching instead");
  gsp->add_flag("--json", gsp_json, "structured output");
  gsp->add_option("-o,--output", gsp_out, "output file (default stdout)");
  gsp->add_option("--dump-intermediates", gsp_dump,
                  "directory for the reduction pipeline's intermediates");

  // solve
  auto* solve_cmd = app.add_subcommand(
      "solve", "find a stable matching or certify unsolvability");
  std::string solve_file, solve_out;
  bool solve_json = false;
  solve_cmd->add_option("instance", solve_file, "instance file")->required();
  solve_cmd->add_flag("--json", solve_json, "structured output");
  solve_cmd->add_option("-o,--output", solve_out, "output file");

  // near-feasible
  auto* nf = app.add_subcommand("near-feasible",
                                "repair capacities to reach solvability");
  std::string nf_file, nf_out, nf_direction = "auto";
  bool nf_json = false;
  nf->add_option("instance", nf_file, "instance file")->required();
  nf->add_option("--direction", nf_direction,
                 "auto (alternate), increase, or decrease")
      ->check(CLI::IsMember({"auto", "increase", "decrease"}));
  nf->add_flag("--json", nf_json, "structured output");
  nf->add_option("-o,--output", nf_out, "output file");

  // ilp
  auto* ilp = app.add_subcommand("ilp", "solve or export the ILP models");
  std::string ilp_file, ilp_out, ilp_export, ilp_objective = "reduced";
  long long ilp_nodes = -1;
  double ilp_time = -1;
  bool ilp_json = false;
  ilp->add_option("instance", ilp_file, "instance file")->required();
  ilp->add_option("--objective", ilp_objective,
                  "reduced, rank1, regret, or egal")
      ->check(CLI::IsMember({"reduced", "rank1", "regret", "egal"}));
  ilp->add_option("--export-lp", ilp_export, "write the LP file here");
  ilp->add_option("--node-limit", ilp_nodes, "search node budget");
  ilp->add_option("--time-limit", ilp_time, "search seconds budget");
  ilp->add_flag("--json", ilp_json, "structured output");
  ilp->add_option("-o,--output", ilp_out, "output file");

  // verify
  auto* verify = app.add_subcommand("verify", "validate artifacts and"
                                              " cross-check with the oracle");
  std::string v_file, v_gsp, v_half, v_matching, v_out;
  bool v_oracle = false, v_json = false;
  int v_max_half_edges = 10;
  verify->add_option("instance", v_file, "instance file")->required();
  verify->add_option("--gsp", v_gsp, "partition file to validate");
  verify->add_option("--half", v_half, "half-matching file to validate");
  verify->add_option("--matching", v_matching,
                     "matching file (pairs in partition syntax)");
  verify->add_flag("--oracle", v_oracle, "run exhaustive cross-checks");
  verify->add_option("--max-half-edges", v_max_half_edges,
                     "half-matching enumeration guard");
  verify->add_flag("--json", v_json, "structured output");
  verify->add_option("-o,--output", v_out, "output file");

  // experiment
  auto* exp = app.add_subcommand("experiment",
                                 "random-instance statistics grid");
  int e_nmin = 2, e_nmax = 32, e_nstep = 2, e_samples = 1000, e_threads = 1;
  uint64_t e_seed = 1;
  std::vector<std::string> e_caps;
  std::string e_out, e_verbose_path;
  bool e_pivot = false, e_verbose = false, e_json = false;
  exp->add_option("--n-min", e_nmin, "smallest n");
  exp->add_option("--n-max", e_nmax, "largest n");
  exp->add_option("--n-step", e_nstep, "n increment");
  exp->add_option("--samples", e_samples, "instances per cell");
  exp->add_option("--seed", e_seed, "base seed; sample k uses seed+k");
  exp->add_option("--caps", e_caps, "capacity function labels");
  exp->add_option("--threads", e_threads, "worker threads");
  exp->add_flag("--pivot", e_pivot, "wide layout, one column per capacity");
  exp->add_flag("--verbose", e_verbose, "stream one row per instance");
  exp->add_option("--verbose-output", e_verbose_path,
                  "per-instance row file (default stderr)");
  exp->add_flag("--json", e_json, "structured output");
  exp->add_option("-o,--output", e_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_n, gen_caps, gen_seed, gen_out);
    if (gsp->parsed())
      return run_gsp(gsp_file, gsp_reduced, gsp_half, gsp_json, gsp_out,
                     gsp_dump);
    if (solve_cmd->parsed()) return run_solve(solve_file, solve_json, solve_out);
    if (nf->parsed())
      return run_near_feasible(nf_file, nf_direction, nf_json, nf_out);
    if (ilp->parsed())
      return run_ilp(ilp_file, ilp_objective, ilp_export, ilp_nodes, ilp_time,
                     ilp_json, ilp_out);
    if (verify->parsed())
      return run_verify(v_file, v_gsp, v_half, v_matching, v_oracle,
                        v_max_half_edges, v_json, v_out);
    if (exp->parsed())
      return run_experiment_cmd(e_nmin, e_nmax, e_nstep, e_samples, e_seed,
                                e_caps, e_threads, e_pivot, e_verbose,
                                e_verbose_path, e_out, e_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
