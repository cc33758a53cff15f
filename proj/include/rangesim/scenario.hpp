#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rangesim/registry.hpp"
#include "rangesim/topology.hpp"
#include "rangesim/vocabulary.hpp"

namespace rangesim {

inline constexpr std::string_view kSchemaVersion = "1";

struct DomainContext {
  std::string domain_tag;
  std::string narrative;
  friend bool operator==(const DomainContext&, const DomainContext&) = default;
};

struct SubProblem {
  std::string id;
  std::string description;
  std::vector<NodeClass> related_asset_classes;
  friend bool operator==(const SubProblem&, const SubProblem&) = default;
};

enum class ObjectiveKind : std::uint8_t { compromise, protect, detect };
std::string_view to_string(ObjectiveKind kind) noexcept;

struct Objective {
  Actor actor = Actor::attacker;
  ObjectiveKind kind = ObjectiveKind::compromise;
  TargetSelector target;
  // Fraction of matching nodes that must be compromised (compromise) or stay
  // uncompromised (protect). Unused by detect.
  double threshold = 1.0;
  friend bool operator==(const Objective&, const Objective&) = default;
};

struct TopologyRecipe {
  // Indexed by NodeClass.
  std::array<std::uint32_t, kNodeClassCount> node_counts{};
  std::uint32_t zone_count = 1;
  double intra_zone_density = 0.0;
  std::uint32_t inter_zone_gateways = 0;
  double vuln_rate = 0.0;
  double credential_rate = 0.0;

  std::uint32_t& count(NodeClass cls) { return node_counts[static_cast<std::size_t>(cls)]; }
  std::uint32_t count(NodeClass cls) const {
    return node_counts[static_cast<std::size_t>(cls)];
  }
  std::uint64_t total_nodes() const;

  friend bool operator==(const TopologyRecipe&, const TopologyRecipe&) = default;
};

// Exactly one of recipe / explicit_topology is set. `seed` feeds
// build_topology and is only meaningful with a recipe.
struct ScenarioParameters {
  std::optional<TopologyRecipe> recipe;
  std::uint64_t seed = 0;
  std::optional<NetworkTopology> explicit_topology;
  friend bool operator==(const ScenarioParameters&, const ScenarioParameters&) = default;
};

struct ScenarioElements {
  std::vector<NodeClass> asset_classes;
  std::vector<std::string> threat_actors;
  std::vector<std::string> capability_refs;
  friend bool operator==(const ScenarioElements&, const ScenarioElements&) = default;
};

struct ScenarioSpec {
  std::string schema_version{kSchemaVersion};
  DomainContext domain_context;
  std::vector<SubProblem> problem_decomposition;
  ScenarioParameters scenario_parameters;
  std::vector<Objective> objectives;
  ScenarioElements elements;
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// Strict parse of a scenario document. Unknown fields are errors.
// Throws MalformedDocument, MissingSection, UnknownField, InvariantViolation.
ScenarioSpec parse_scenario(std::string_view document);

// Canonical JSON text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const ScenarioSpec& spec);

// Topology-level JSON used both inside scenarios and on its own.
NetworkTopology parse_topology(std::string_view document);
std::string serialize_topology(const NetworkTopology& topology);

// A node with the class's default services and asset value.
Node make_default_node(NodeClass cls, NodeId id, std::string zone);
// Edge protocol the builder uses between two classes.
std::string default_link_protocol(NodeClass a, NodeClass b);

// Expands a recipe into a concrete topology.
//
// Nodes are created class by class in NodeClass order and named
// "<class>-<k>" (k from 1); the i-th created node lands in zone
// "zone_<(i mod zone_count)+1>". Named random substreams drive the stages:
//   edges        one draw per unordered same-zone pair (lexicographic id
//                order); edge u -> v (bidirectional) iff draw < density.
//   gateways     for each zone pair (a < b) and link l < inter_zone_gateways,
//                gateway (pair_index * links + l) mod |gateways| is wired to
//                one drawn node in each zone it does not already belong to.
//   vulns        one draw per non-gateway node against vuln_rate; hits get a
//                vulnerability with a drawn technique tag and odds.
//   credentials  one draw per node against credential_rate; hits store a
//                credential granting access to one drawn same-zone peer.
// Throws EmptyRecipe, InsufficientGateways, InvariantViolation.
NetworkTopology build_topology(const TopologyRecipe& recipe, const CapabilityRegistry& registry,
                               std::uint64_t seed);

// The explicit topology, or the recipe expanded with the scenario's seed.
NetworkTopology resolve_topology(const ScenarioSpec& spec, const CapabilityRegistry& registry);

// Collects every finding; never throws for content problems.
ValidationReport validate_spec(const ScenarioSpec& spec, const CapabilityRegistry& registry);

std::string serialize_report(const ValidationReport& report);

}  // namespace rangesim
