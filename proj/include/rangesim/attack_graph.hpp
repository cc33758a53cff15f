#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rangesim/registry.hpp"
#include "rangesim/topology.hpp"

namespace rangesim {

// Source token for steps that enter the topology from outside.
inline constexpr std::string_view kExternal = "EXTERNAL";

struct AttackStep {
  std::string source;  // node id or kExternal
  std::string capability_id;
  NodeId target;
  double step_prob = 0.0;
  std::uint32_t step_cost = 0;
  friend bool operator==(const AttackStep&, const AttackStep&) = default;
};

struct AttackPath {
  std::vector<AttackStep> steps;
  double success_prob = 0.0;
  std::uint64_t total_cost = 0;
  friend bool operator==(const AttackPath&, const AttackPath&) = default;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct PathQuery {
  std::vector<NodeId> entries;
  TargetSelector target;
  std::size_t k = kUnlimited;
  std::size_t max_len = 8;
};

struct PathScore {
  double success_prob = 0.0;
  std::uint64_t total_cost = 0;
  friend bool operator==(const PathScore&, const PathScore&) = default;
};

// Static hop realizability: predicates are judged against the topology alone
// (no defenses, the source is footheld, the target is untouched, a credential
// is "held" if any credential in the topology grants access to the target).
// Among realizing capabilities the highest step probability wins, then the
// lower cost, then the smaller id.
std::optional<AttackStep> best_entry_step(const NetworkTopology& topology,
                                          const CapabilityRegistry& registry,
                                          const NodeId& node);
std::optional<AttackStep> best_hop_step(const NetworkTopology& topology,
                                        const CapabilityRegistry& registry, const NodeId& src,
                                        const NodeId& dst);

// Nodes some entry-class capability can land on from outside, sorted.
std::vector<NodeId> entry_surface(const NetworkTopology& topology,
                                  const CapabilityRegistry& registry);

// Documented ranking: success_prob descending, fewer steps, lexicographic
// target sequence, then the first step's source.
bool ranks_before(const AttackPath& a, const AttackPath& b);

// All simple paths (no node visited twice) from the entries to nodes matching
// the selector, at most max_len steps, ranked and truncated to k. An entry on
// the entry surface starts with an EXTERNAL step; any other entry is taken as
// an existing foothold. Throws UnknownEntryNode, TargetSelectorEmpty.
std::vector<AttackPath> enumerate_attack_paths(const NetworkTopology& topology,
                                               const CapabilityRegistry& registry,
                                               const PathQuery& query);

// Product of step probabilities and sum of step costs. Throws
// NonContiguousPath (also for an empty step list).
PathScore score_path(const std::vector<AttackStep>& steps);

// Entries plus everything reachable through realizable hops, sorted.
std::vector<NodeId> reachable_set(const NetworkTopology& topology,
                                  const CapabilityRegistry& registry,
                                  const std::vector<NodeId>& entries);

// Greedy hitting set: repeatedly take the non-entry node lying on the most
// paths not hit yet (ties to the smaller id) and pair it with a shocktrap.
// Stops at the budget, when every path is hit, or when nothing hits.
std::vector<std::pair<NodeId, DefenseKind>> suggest_defense_placements(
    const NetworkTopology& topology, const std::vector<AttackPath>& paths, std::size_t budget);

// Nodes of `path` a defense may sit on: every step target except an entry
// reached from EXTERNAL.
std::vector<NodeId> non_entry_nodes(const AttackPath& path);

}  // namespace rangesim
