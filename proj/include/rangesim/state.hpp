#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rangesim/topology.hpp"
#include "rangesim/vocabulary.hpp"

namespace rangesim {

struct Alarm {
  std::uint32_t round = 0;
  NodeId node;
  friend bool operator==(const Alarm&, const Alarm&) = default;
};

// Mutable-by-copy simulation state. Operations take a state by const
// reference and return a new value.
struct SimulationState {
  std::uint32_t round = 0;
  std::map<NodeId, CompromiseLevel> compromise;
  std::set<NodeId> footholds;
  std::map<NodeId, std::set<DefenseKind>> deployed;
  std::set<std::string> credentials_held;
  // The attacker skips every round r with trapped_until > r.
  std::uint32_t trapped_until = 0;
  std::vector<Alarm> alarms;
  // Round in which each node was first compromised.
  std::map<NodeId, std::uint32_t> compromised_at;
  // Attacker actions ("capability|target|source") that reported success and
  // are therefore not retried. Deceived successes land here too.
  std::set<std::string> settled_actions;

  CompromiseLevel level(std::string_view node) const;
  bool has_defense(std::string_view node, DefenseKind kind) const;

  friend bool operator==(const SimulationState&, const SimulationState&) = default;
};

// Fresh state: every node uncompromised, nothing deployed, round 0.
SimulationState initial_state(const NetworkTopology& topology);

}  // namespace rangesim
