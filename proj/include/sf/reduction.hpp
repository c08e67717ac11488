#pragma once

#include <array>
#include <vector>

#include "sf/gsp.hpp"
#include "sf/instance.hpp"
#include "sf/sr.hpp"

namespace sf {

/// Bookkeeping for the two splitting steps: the six gadget agents replacing
/// each original edge, and the capacity-many copies replacing each original
/// agent. Gadget ids survive vertex splitting unchanged; copy 1 of an agent
/// reuses the original id.
struct GadgetMap {
  struct EdgeGadget {
    AgentId i = 0, j = 0;            // original endpoints, i < j
    std::array<AgentId, 6> agents{};  // the gadget agents 1..6
  };

  int original_count = 0;
  int split_agent_count = 0;
  std::vector<EdgeGadget> edges;
  std::vector<std::vector<AgentId>> copies;  // per original agent

  const EdgeGadget& gadget(size_t edge_index) const {
    return edges[edge_index];
  }
};

/// Replaces every edge by the six-agent gadget; original agents keep their
/// relative order, pointing at the gadget attachment agents.
std::pair<PreferenceGraph, GadgetMap> split_edges(const PreferenceGraph& g);

/// Replaces every original agent by capacity-many capacity-1 copies wired to
/// all of its gadget attachment points, preserving relative order on both
/// sides.
std::pair<PreferenceGraph, GadgetMap> split_vertices(const PreferenceGraph& g,
                                                     const GadgetMap& map);

/// Folds a stable half-matching of the split instance back onto the original
/// agents: the weight of an original edge is the weight carried between the
/// copies of its first endpoint and the gadget's first attachment agent.
/// Throws if the two attachment sides disagree (a gadget construction bug).
HalfMatching lift_half_matching(const GadgetMap& map, const HalfMatching& srw);

/// The full pipeline: graphic form, both splits, the roommates solve, the
/// lift, and the conversions back to a canonical GSP1.
Gsp1 compute_gsp(const SfInstance& inst);

/// compute_gsp with every intermediate exposed, for debugging dumps and
/// tests.
struct GspPipeline {
  PreferenceGraph edge_split;
  PreferenceGraph vertex_split;
  GadgetMap map;
  SfInstance sr_instance;
  SrPartition sr_partition;
  HalfMatching sr_half;  // on the split instance
  HalfMatching lifted;   // on the original instance
  Gsp2 gsp2;
  Gsp1 gsp1;
};

GspPipeline compute_gsp_pipeline(const SfInstance& inst);

}  // namespace sf
