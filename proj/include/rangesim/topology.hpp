#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rangesim/vocabulary.hpp"

namespace rangesim {

struct Service {
  std::string name;
  int port = 0;

  friend bool operator==(const Service&, const Service&) = default;
};

struct Node {
  NodeId id;
  NodeClass cls = NodeClass::sensor;
  std::string zone;
  std::vector<Service> services;
  std::vector<std::string> vulnerability_ids;
  std::vector<std::string> credential_ids;
  int asset_value = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId src;
  NodeId dst;
  std::string protocol;
  bool bidirectional = false;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Vulnerability {
  std::string id;
  std::string technique_tag;
  AccessRequirement access = AccessRequirement::network;
  double success_prob = 0.0;
  double detection_prob = 0.0;
  Privilege gained_privilege = Privilege::user;

  friend bool operator==(const Vulnerability&, const Vulnerability&) = default;
};

struct Credential {
  std::string id;
  NodeId stored_on;
  std::vector<NodeId> grants_access_to;

  friend bool operator==(const Credential&, const Credential&) = default;
};

// Theoretical-level network: typed nodes in zones, directed (optionally
// bidirectional) edges, plus the vulnerability and credential catalogs the
// nodes refer to by id.
struct NetworkTopology {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> zones;
  std::vector<Vulnerability> vulnerabilities;
  std::vector<Credential> credentials;

  friend bool operator==(const NetworkTopology&, const NetworkTopology&) = default;
};

const Node* find_node(const NetworkTopology& topology, std::string_view id) noexcept;
const Vulnerability* find_vulnerability(const NetworkTopology& topology,
                                        std::string_view id) noexcept;
const Credential* find_credential(const NetworkTopology& topology,
                                  std::string_view id) noexcept;

// True if traffic can flow src -> dst over some edge (a bidirectional edge
// counts in both directions).
bool connects(const NetworkTopology& topology, std::string_view src,
              std::string_view dst) noexcept;

// Selects nodes either by exact id or by class.
struct TargetSelector {
  std::variant<NodeId, NodeClass> value;

  static TargetSelector node(NodeId id) { return {std::move(id)}; }
  static TargetSelector of_class(NodeClass cls) { return {cls}; }

  bool matches(const Node& node) const noexcept;
  std::string describe() const;

  friend bool operator==(const TargetSelector&, const TargetSelector&) = default;
};

std::vector<NodeId> select_nodes(const NetworkTopology& topology,
                                 const TargetSelector& selector);

// One finding in a ValidationReport.
struct Finding {
  std::string code;
  std::string message;
  std::string location;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Codes:
//   errors   UnresolvedCapability DuplicateNodeId DuplicateZoneId UnknownZone
//            InvalidNode DanglingEdge SelfLoop DuplicateEdge
//            DuplicateVulnerabilityId UnknownVulnerability
//            DuplicateCredentialId UnknownCredential DanglingCredential
//            ObjectiveTargetUnknown TopologyBuildFailed NoAttackPath
//   warnings DisconnectedTopology
struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool valid() const noexcept { return errors.empty(); }
  bool has_error(std::string_view code) const noexcept;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Structural checks for every NetworkTopology invariant. Appends errors and
// the DisconnectedTopology warning to `report`; `location` prefixes paths.
void check_topology(const NetworkTopology& topology, ValidationReport& report,
                    const std::string& location = "topology");

}  // namespace rangesim
