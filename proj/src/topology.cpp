#include "rangesim/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace rangesim {

const Node* find_node(const NetworkTopology& topology, std::string_view id) noexcept {
  for (const auto& node : topology.nodes) {
    if (node.id == id) return &node;
  }
  return nullptr;
}

const Vulnerability* find_vulnerability(const NetworkTopology& topology,
                                        std::string_view id) noexcept {
  for (const auto& v : topology.vulnerabilities) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

const Credential* find_credential(const NetworkTopology& topology,
                                  std::string_view id) noexcept {
  for (const auto& c : topology.credentials) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

bool connects(const NetworkTopology& topology, std::string_view src,
              std::string_view dst) noexcept {
  return std::any_of(topology.edges.begin(), topology.edges.end(), [&](const Edge& e) {
    return (e.src == src && e.dst == dst) ||
           (e.bidirectional && e.src == dst && e.dst == src);
  });
}

bool TargetSelector::matches(const Node& node) const noexcept {
  if (const auto* id = std::get_if<NodeId>(&value)) return node.id == *id;
  return node.cls == std::get<NodeClass>(value);
}

std::string TargetSelector::describe() const {
  if (const auto* id = std::get_if<NodeId>(&value)) return "node:" + *id;
  return "class:" + std::string(to_string(std::get<NodeClass>(value)));
}

std::vector<NodeId> select_nodes(const NetworkTopology& topology,
                                 const TargetSelector& selector) {
  std::vector<NodeId> out;
  for (const auto& node : topology.nodes) {
    if (selector.matches(node)) out.push_back(node.id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ValidationReport::has_error(std::string_view code) const noexcept {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const Finding& f) { return f.code == code; });
}

namespace {

// Union-find over node indices for the connectivity warning.
struct Components {
  std::vector<std::size_t> parent;
  explicit Components(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

void check_topology(const NetworkTopology& topology, ValidationReport& report,
                    const std::string& location) {
  auto error = [&](std::string code, std::string message, std::string where) {
    report.errors.push_back({std::move(code), std::move(message), std::move(where)});
  };

  std::set<std::string> zones;
  for (std::size_t i = 0; i < topology.zones.size(); ++i) {
    if (!zones.insert(topology.zones[i]).second) {
      error("DuplicateZoneId", "zone '" + topology.zones[i] + "' declared twice",
            location + ".zones[" + std::to_string(i) + "]");
    }
  }

  std::map<std::string, std::size_t> node_index;
  for (std::size_t i = 0; i < topology.nodes.size(); ++i) {
    const Node& node = topology.nodes[i];
    const std::string where = location + ".nodes[" + std::to_string(i) + "]";
    if (!node_index.emplace(node.id, i).second) {
      error("DuplicateNodeId", "node id '" + node.id + "' is not unique", where);
    }
    if (!zones.contains(node.zone)) {
      error("UnknownZone", "node '" + node.id + "' is in undeclared zone '" + node.zone + "'",
            where);
    }
    if (node.id.empty() || node.asset_value < 0 || node.asset_value > 100) {
      error("InvalidNode", "node '" + node.id + "' has an empty id or asset_value outside [0,100]",
            where);
    }
    for (const auto& service : node.services) {
      if (service.port < 1 || service.port > 65535) {
        error("InvalidNode", "service '" + service.name + "' has invalid port", where);
      }
    }
    for (const auto& vid : node.vulnerability_ids) {
      if (!find_vulnerability(topology, vid)) {
        error("UnknownVulnerability", "node '" + node.id + "' references unknown vulnerability '" +
                                          vid + "'",
              where);
      }
    }
    for (const auto& cid : node.credential_ids) {
      if (!find_credential(topology, cid)) {
        error("UnknownCredential",
              "node '" + node.id + "' references unknown credential '" + cid + "'", where);
      }
    }
  }

  std::set<std::tuple<std::string, std::string, std::string>> seen_edges;
  for (std::size_t i = 0; i < topology.edges.size(); ++i) {
    const Edge& e = topology.edges[i];
    const std::string where = location + ".edges[" + std::to_string(i) + "]";
    if (!node_index.contains(e.src) || !node_index.contains(e.dst)) {
      error("DanglingEdge", "edge " + e.src + " -> " + e.dst + " references a missing node",
            where);
    }
    if (e.src == e.dst) {
      error("SelfLoop", "edge on '" + e.src + "' is a self-loop", where);
    }
    if (!seen_edges.emplace(e.src, e.dst, e.protocol).second) {
      error("DuplicateEdge",
            "duplicate edge " + e.src + " -> " + e.dst + " (" + e.protocol + ")", where);
    }
  }

  std::set<std::string> vuln_ids;
  for (std::size_t i = 0; i < topology.vulnerabilities.size(); ++i) {
    const auto& v = topology.vulnerabilities[i];
    if (!vuln_ids.insert(v.id).second) {
      error("DuplicateVulnerabilityId", "vulnerability id '" + v.id + "' is not unique",
            location + ".vulnerabilities[" + std::to_string(i) + "]");
    }
  }

  std::set<std::string> cred_ids;
  for (std::size_t i = 0; i < topology.credentials.size(); ++i) {
    const auto& c = topology.credentials[i];
    const std::string where = location + ".credentials[" + std::to_string(i) + "]";
    if (!cred_ids.insert(c.id).second) {
      error("DuplicateCredentialId", "credential id '" + c.id + "' is not unique", where);
    }
    bool dangling = !node_index.contains(c.stored_on) || c.grants_access_to.empty();
    for (const auto& target : c.grants_access_to) {
      dangling = dangling || !node_index.contains(target);
    }
    if (dangling) {
      error("DanglingCredential",
            "credential '" + c.id + "' is stored on or grants access to a missing node", where);
    }
  }

  if (topology.nodes.size() > 1) {
    Components components(topology.nodes.size());
    for (const auto& e : topology.edges) {
      auto a = node_index.find(e.src);
      auto b = node_index.find(e.dst);
      if (a != node_index.end() && b != node_index.end()) {
        components.unite(a->second, b->second);
      }
    }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < topology.nodes.size(); ++i) roots.insert(components.find(i));
    if (roots.size() > 1) {
      report.warnings.push_back({"DisconnectedTopology",
                                 "topology has " + std::to_string(roots.size()) +
                                     " connected components",
                                 location});
    }
  }
}

}  // namespace rangesim
