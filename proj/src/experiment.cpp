#include "sf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sf/gsp.hpp"
#include "sf/reduction.hpp"

namespace sf {

namespace {

const std::vector<std::string> kCapLabels = {
    "1", "ceil((n-1)/4)", "ceil((n-1)/2)", "ceil((3n-3)/4)", "n-1"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct SampleResult {
  bool solvable = false;
  int odd_count = 0;
  int odd_agents = 0;
  int base_objective = 0;  // ordered half-match count
};

SampleResult measure(const SfInstance& inst) {
  SampleResult r;
  const auto odd = odd_cycles(compute_gsp(inst));
  r.solvable = odd.empty();
  r.odd_count = static_cast<int>(odd.size());
  for (const auto& cycle : odd) r.odd_agents += static_cast<int>(cycle.size());
  // Minimal ordered half-match count: twice the invariant odd-cycle load.
  r.base_objective = 2 * r.odd_agents;
  return r;
}

}  // namespace

const std::vector<std::string>& default_cap_labels() { return kCapLabels; }

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  for (int n = 2; n <= 32; n += 2) cfg.n_values.push_back(n);
  cfg.cap_labels = kCapLabels;
  return cfg;
}

int capacity_for(const std::string& label, int n) {
  if (label == "1") return 1;
  if (label == "ceil((n-1)/4)") return (n - 1 + 3) / 4;
  if (label == "ceil((n-1)/2)") return (n - 1 + 1) / 2;
  if (label == "ceil((3n-3)/4)") return (3 * n - 3 + 3) / 4;
  if (label == "n-1") return n - 1;
  throw std::invalid_argument("unknown capacity label: " + label);
}

std::vector<CellStats> run_experiment(const ExperimentConfig& cfg,
                                      std::ostream* per_instance_sink) {
  std::vector<CellStats> cells;
  for (int n : cfg.n_values) {
    for (const auto& label : cfg.cap_labels) {
      const int cap = capacity_for(label, n);
      if (cap < 1 || cap > n - 1)
        throw std::invalid_argument("capacity function invalid at n=" +
                                    std::to_string(n));
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<SampleResult> results(cfg.samples);
      auto work = [&](int from, int to) {
        for (int k = from; k < to; ++k)
          results[k] = measure(random_instance(n, cap, cfg.seed_base + k));
      };
      const int workers =
          std::max(1, std::min(cfg.threads, cfg.samples));
      if (workers == 1) {
        work(0, cfg.samples);
      } else {
        std::vector<std::thread> pool;
        const int chunk = (cfg.samples + workers - 1) / workers;
        for (int w = 0; w < workers; ++w)
          pool.emplace_back(work, w * chunk,
                            std::min(cfg.samples, (w + 1) * chunk));
        for (auto& t : pool) t.join();
      }
      const auto t1 = std::chrono::steady_clock::now();

      CellStats cell;
      cell.n = n;
      cell.cap_label = label;
      cell.cap_value = cap;
      cell.samples = cfg.samples;
      cell.seed_base = cfg.seed_base;
      cell.total_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
      long long solvable = 0, odd = 0, agents = 0, objective = 0;
      for (int k = 0; k < cfg.samples; ++k) {
        solvable += results[k].solvable ? 1 : 0;
        odd += results[k].odd_count;
        agents += results[k].odd_agents;
        objective += results[k].base_objective;
        if (cfg.verbose && per_instance_sink)
          *per_instance_sink << n << ',' << label << ',' << cap << ','
                             << cfg.seed_base + k << ','
                             << (results[k].solvable ? 1 : 0) << ','
                             << results[k].odd_count << ','
                             << results[k].odd_agents << '\n';
      }
      cell.ratio_solvable = double(solvable) / cfg.samples;
      cell.avg_odd_cycles = double(odd) / cfg.samples;
      cell.avg_agents_in_odd = double(agents) / cfg.samples;
      cell.avg_base_objective = double(objective) / cfg.samples;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string experiment_csv(const std::vector<CellStats>& cells) {
  std::ostringstream out;
  out << "n,cap_label,cap_value,samples,ratio_solvable,avg_odd_cycles,"
         "avg_agents_in_odd,seed_base\n";
  for (const auto& c : cells)
    out << c.n << ',' << c.cap_label << ',' << c.cap_value << ','
        << c.samples << ',' << fmt(c.ratio_solvable) << ','
        << fmt(c.avg_odd_cycles) << ',' << fmt(c.avg_agents_in_odd) << ','
        << c.seed_base << '\n';
  return out.str();
}

std::string experiment_csv_pivot(const std::vector<CellStats>& cells) {
  std::vector<std::string> labels;
  std::vector<int> ns;
  for (const auto& c : cells) {
    if (std::find(labels.begin(), labels.end(), c.cap_label) == labels.end())
      labels.push_back(c.cap_label);
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
  }
  std::ostringstream out;
  out << 'n';
  for (const auto& l : labels) out << ",ratio[" << l << ']';
  out << '\n';
  for (int n : ns) {
    out << n;
    for (const auto& l : labels) {
      auto it = std::find_if(cells.begin(), cells.end(), [&](const CellStats& c) {
        return c.n == n && c.cap_label == l;
      });
      out << ',' << (it == cells.end() ? "" : fmt(it->ratio_solvable));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sf
