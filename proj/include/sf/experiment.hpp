#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sf/instance.hpp"

namespace sf {

/// Grid of random-instance cells: agent counts times uniform capacity
/// functions, a fixed sample count per cell, and a base seed. Sample k of a
/// cell always uses seed seed_base + k, so any row can be replayed.
struct ExperimentConfig {
  std::vector<int> n_values;          // default 2..32 step 2
  std::vector<std::string> cap_labels;  // default: the five uniform functions
  int samples = 1000;
  uint64_t seed_base = 1;
  int threads = 1;
  bool verbose = false;  // stream one row per instance

  static ExperimentConfig defaults();
};

struct CellStats {
  int n = 0;
  std::string cap_label;
  int cap_value = 0;
  int samples = 0;
  double ratio_solvable = 0;
  double avg_odd_cycles = 0;
  double avg_agents_in_odd = 0;
  double avg_base_objective = 0;  // ordered half-match count at the optimum
  double total_ms = 0;
  uint64_t seed_base = 0;
};

/// Capacity value of a labelled function at a given n.
int capacity_for(const std::string& label, int n);
const std::vector<std::string>& default_cap_labels();

/// Runs the grid. Cells are processed in (n, capacity) order; samples are
/// reduced in seed order regardless of which worker finished them. When
/// verbose, one replayable line per instance goes to per_instance_sink.
std::vector<CellStats> run_experiment(const ExperimentConfig& cfg,
                                      std::ostream* per_instance_sink = nullptr);

/// Long CSV: n,cap_label,cap_value,samples,ratio_solvable,avg_odd_cycles,
/// avg_agents_in_odd,seed_base. Byte-identical across runs of one build.
std::string experiment_csv(const std::vector<CellStats>& cells);

/// Wide layout: one row per n, one solvable-ratio column per capacity label.
std::string experiment_csv_pivot(const std::vector<CellStats>& cells);

}  // namespace sf
