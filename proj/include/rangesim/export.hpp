#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rangesim/attack_graph.hpp"
#include "rangesim/simulation.hpp"
#include "rangesim/topology.hpp"

namespace rangesim {

// Graphviz rendering of a topology with optional highlighted attack paths.
//
//   digraph spidersim {
//     subgraph cluster_<zone> {
//       label="<zone>";
//       "<id>" [label="<id>\n<class>"];
//     }
//     "EXTERNAL" [shape=diamond];
//     "<src>" -> "<dst>";
//     "<src>" -> "<dst>" [color="red", penwidth=2];
//   }
//
// Zones, nodes and edges are emitted in lexicographic order; parallel edges
// collapse to one line. The cluster name is quoted when the zone id is not a
// bare DOT identifier. Throws UnknownPathNode.
std::string export_dot(const NetworkTopology& topology,
                       const std::optional<std::vector<AttackPath>>& highlighted = std::nullopt);

// Canonical JSON with keys config, scenario_digest, events, final_state.
std::string export_trace(const SimulationTrace& trace);

std::string serialize_paths(const std::vector<AttackPath>& paths);
std::vector<AttackPath> parse_paths_document(std::string_view text);

std::string serialize_metrics(const Metrics& metrics);
std::string serialize_batch(const BatchResult& batch);

}  // namespace rangesim
