#include "sf/reduction.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace sf {

namespace {

uint64_t pair_key(AgentId i, AgentId j) {
  return (static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(j);
}

}  // namespace

std::pair<PreferenceGraph, GadgetMap> split_edges(const PreferenceGraph& g) {
  const int n = g.vertex_count();
  GadgetMap map;
  map.original_count = n;
  map.copies.resize(n);
  for (AgentId v = 1; v <= n; ++v) map.copies[v - 1] = {v};

  const auto edge_list = g.edges();
  std::unordered_map<uint64_t, size_t> edge_index;
  edge_index.reserve(edge_list.size() * 2);
  map.edges.resize(edge_list.size());
  for (size_t e = 0; e < edge_list.size(); ++e) {
    auto [i, j] = edge_list[e];
    auto& gadget = map.edges[e];
    gadget.i = i;
    gadget.j = j;
    for (int k = 0; k < 6; ++k)
      gadget.agents[k] = n + static_cast<int>(6 * e) + k + 1;
    edge_index[pair_key(i, j)] = e;
  }
  map.split_agent_count = n + 6 * static_cast<int>(edge_list.size());

  PreferenceGraph out;
  out.adjacency.resize(map.split_agent_count);
  out.caps.assign(map.split_agent_count, 1);
  for (AgentId v = 1; v <= n; ++v) {
    out.caps[v - 1] = g.capacity(v);
    auto& adj = out.adjacency[v - 1];
    adj.reserve(g.neighbors(v).size());
    for (AgentId u : g.neighbors(v)) {
      const auto& gadget =
          map.edges[edge_index.at(pair_key(std::min(u, v), std::max(u, v)))];
      adj.push_back(v < u ? gadget.agents[0] : gadget.agents[3]);
    }
  }
  for (const auto& gadget : map.edges) {
    const auto& a = gadget.agents;
    out.adjacency[a[0] - 1] = {a[1], gadget.i, a[5]};
    out.adjacency[a[1] - 1] = {a[2], a[0]};
    out.adjacency[a[2] - 1] = {a[3], a[1]};
    out.adjacency[a[3] - 1] = {a[4], gadget.j, a[2]};
    out.adjacency[a[4] - 1] = {a[5], a[3]};
    out.adjacency[a[5] - 1] = {a[0], a[4]};
  }
  return {std::move(out), std::move(map)};
}

std::pair<PreferenceGraph, GadgetMap> split_vertices(const PreferenceGraph& g,
                                                     const GadgetMap& map) {
  const int n = map.original_count;
  GadgetMap out_map = map;
  int next_id = n + 6 * static_cast<int>(map.edges.size());
  for (AgentId v = 1; v <= n; ++v) {
    out_map.copies[v - 1].clear();
    if (g.capacity(v) >= 1) out_map.copies[v - 1] = {v};
    for (int k = 2; k <= g.capacity(v); ++k)
      out_map.copies[v - 1].push_back(++next_id);
  }
  out_map.split_agent_count = next_id;

  PreferenceGraph out;
  out.adjacency.resize(next_id);
  out.caps.assign(next_id, 1);
  for (AgentId v = 1; v <= n; ++v)
    for (AgentId copy : out_map.copies[v - 1])
      out.adjacency[copy - 1] = g.neighbors(v);
  for (const auto& gadget : map.edges) {
    const auto& a = gadget.agents;
    const auto& ci = out_map.copies[gadget.i - 1];
    const auto& cj = out_map.copies[gadget.j - 1];
    auto& adj1 = out.adjacency[a[0] - 1];
    adj1 = {a[1]};
    adj1.insert(adj1.end(), ci.begin(), ci.end());
    adj1.push_back(a[5]);
    auto& adj4 = out.adjacency[a[3] - 1];
    adj4 = {a[4]};
    adj4.insert(adj4.end(), cj.begin(), cj.end());
    adj4.push_back(a[2]);
    out.adjacency[a[1] - 1] = {a[2], a[0]};
    out.adjacency[a[2] - 1] = {a[3], a[1]};
    out.adjacency[a[4] - 1] = {a[5], a[3]};
    out.adjacency[a[5] - 1] = {a[0], a[4]};
  }
  return {std::move(out), std::move(out_map)};
}

HalfMatching lift_half_matching(const GadgetMap& map, const HalfMatching& srw) {
  // Role lookup over split ids.
  const int total = map.split_agent_count;
  std::vector<AgentId> copy_of(total + 1, 0);
  std::vector<int> gadget_edge(total + 1, -1), gadget_pos(total + 1, 0);
  for (AgentId v = 1; v <= map.original_count; ++v)
    for (AgentId c : map.copies[v - 1]) copy_of[c] = v;
  for (size_t e = 0; e < map.edges.size(); ++e)
    for (int k = 0; k < 6; ++k) {
      gadget_edge[map.edges[e].agents[k]] = static_cast<int>(e);
      gadget_pos[map.edges[e].agents[k]] = k + 1;
    }

  std::vector<int> w1(map.edges.size(), 0), w4(map.edges.size(), 0);
  auto tally = [&](AgentPair p, int units) {
    for (int flip = 0; flip < 2; ++flip) {
      const AgentId a = flip ? p.second : p.first;
      const AgentId b = flip ? p.first : p.second;
      if (a > total || b > total)
        throw std::invalid_argument("lift: id outside the split instance");
      if (copy_of[a] == 0 || gadget_edge[b] < 0) continue;
      const auto& gadget = map.edges[gadget_edge[b]];
      if (gadget_pos[b] == 1 && gadget.i == copy_of[a])
        w1[gadget_edge[b]] += units;
      else if (gadget_pos[b] == 4 && gadget.j == copy_of[a])
        w4[gadget_edge[b]] += units;
      else if (gadget_pos[b] == 1 || gadget_pos[b] == 4)
        throw std::logic_error("lift: copy matched to a foreign gadget");
    }
  };
  for (auto e : srw.half) tally(e, 1);
  for (auto e : srw.full) tally(e, 2);

  HalfMatching lifted;
  for (size_t e = 0; e < map.edges.size(); ++e) {
    if (w1[e] != w4[e])
      throw std::logic_error(
          "lift: attachment weights disagree on edge {" +
          std::to_string(map.edges[e].i) + "," +
          std::to_string(map.edges[e].j) + "}: " + std::to_string(w1[e]) +
          " vs " + std::to_string(w4[e]));
    if (w1[e] == 1)
      lifted.half.push_back({map.edges[e].i, map.edges[e].j});
    else if (w1[e] == 2)
      lifted.full.push_back({map.edges[e].i, map.edges[e].j});
    else if (w1[e] > 2)
      throw std::logic_error("lift: attachment weight above 1");
  }
  lifted.normalize();
  return lifted;
}

GspPipeline compute_gsp_pipeline(const SfInstance& inst) {
  GspPipeline p;
  auto [es, m1] = split_edges(to_graphic(inst));
  p.edge_split = std::move(es);
  auto [vs, m2] = split_vertices(p.edge_split, m1);
  p.vertex_split = std::move(vs);
  p.map = std::move(m2);
  p.sr_instance = from_graphic(p.vertex_split);
  p.sr_partition = stable_partition_sr(p.sr_instance);
  p.sr_half = half_matching_from_gsp(Gsp1{p.sr_partition.cycles});
  p.lifted = lift_half_matching(p.map, p.sr_half);
  p.gsp2 = gsp2_from_half_matching(inst, p.lifted);
  p.gsp1 = gsp1_from_gsp2(inst, p.gsp2);
  return p;
}

Gsp1 compute_gsp(const SfInstance& inst) {
  return compute_gsp_pipeline(inst).gsp1;
}

}  // namespace sf
