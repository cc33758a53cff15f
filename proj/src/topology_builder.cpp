#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "rangesim/error.hpp"
#include "rangesim/rng.hpp"
#include "rangesim/scenario.hpp"

namespace rangesim {

namespace {

int default_asset_value(NodeClass cls) {
  switch (cls) {
    case NodeClass::sensor: return 40;
    case NodeClass::controller: return 90;
    case NodeClass::gateway: return 50;
    case NodeClass::camera_server: return 60;
    case NodeClass::maintenance_endpoint: return 30;
    case NodeClass::workstation: return 20;
    case NodeClass::data_server: return 80;
  }
  return 0;
}

std::vector<Service> default_services(NodeClass cls) {
  switch (cls) {
    case NodeClass::sensor: return {{"modbus", 502}};
    case NodeClass::controller: return {{"modbus", 502}, {"ssh", 22}};
    case NodeClass::gateway: return {{"ssh", 22}, {"https", 443}};
    case NodeClass::camera_server: return {{"rtsp", 554}, {"http", 80}};
    case NodeClass::maintenance_endpoint: return {{"rdp", 3389}};
    case NodeClass::workstation: return {{"smb", 445}};
    case NodeClass::data_server: return {{"postgres", 5432}};
  }
  return {};
}

std::string link_protocol(NodeClass a, NodeClass b) {
  auto either = [&](NodeClass c) { return a == c || b == c; };
  if (either(NodeClass::camera_server)) return "rtsp";
  if (either(NodeClass::sensor) || either(NodeClass::controller)) return "modbus";
  return "tcp";
}

constexpr std::array<double, 4> kVulnSuccess = {0.3, 0.5, 0.7, 0.9};
constexpr std::array<double, 3> kVulnDetection = {0.1, 0.2, 0.3};
constexpr double kAdminVulnRate = 0.3;

bool is_fraction(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

Node make_default_node(NodeClass cls, NodeId id, std::string zone) {
  Node node;
  node.id = std::move(id);
  node.cls = cls;
  node.zone = std::move(zone);
  node.services = default_services(cls);
  node.asset_value = default_asset_value(cls);
  return node;
}

std::string default_link_protocol(NodeClass a, NodeClass b) { return link_protocol(a, b); }

NetworkTopology build_topology(const TopologyRecipe& recipe, const CapabilityRegistry& registry,
                               std::uint64_t seed) {
  if (recipe.total_nodes() == 0) throw Error(Errc::EmptyRecipe, "all node counts are zero");
  if (recipe.zone_count < 1) throw Error(Errc::InvariantViolation, "zone_count must be >= 1");
  if (!is_fraction(recipe.intra_zone_density) || !is_fraction(recipe.vuln_rate) ||
      !is_fraction(recipe.credential_rate)) {
    throw Error(Errc::InvariantViolation, "recipe fractions must lie in [0,1]");
  }
  if (recipe.inter_zone_gateways > 0 && recipe.count(NodeClass::gateway) == 0 &&
      recipe.zone_count > 1) {
    throw Error(Errc::InsufficientGateways,
                "inter-zone links requested but the recipe has no gateway nodes");
  }

  NetworkTopology t;
  for (std::uint32_t z = 1; z <= recipe.zone_count; ++z) t.zones.push_back("zone_" + std::to_string(z));

  std::size_t created = 0;
  for (auto cls : kAllNodeClasses) {
    for (std::uint32_t k = 1; k <= recipe.count(cls); ++k, ++created) {
      t.nodes.push_back(make_default_node(cls, std::string(to_string(cls)) + "-" + std::to_string(k),
                                          t.zones[created % recipe.zone_count]));
    }
  }

  std::map<std::string, std::vector<std::size_t>> by_zone;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) by_zone[t.nodes[i].zone].push_back(i);
  for (auto& [zone, members] : by_zone) {
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return t.nodes[a].id < t.nodes[b].id; });
  }

  Rng edges = Rng::substream(seed, "edges");
  for (const auto& zone : t.zones) {
    const auto& members = by_zone[zone];
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Node& u = t.nodes[members[a]];
        const Node& v = t.nodes[members[b]];
        if (edges.uniform() < recipe.intra_zone_density) {
          t.edges.push_back({u.id, v.id, link_protocol(u.cls, v.cls), true});
        }
      }
    }
  }

  if (recipe.zone_count > 1 && recipe.inter_zone_gateways > 0) {
    Rng links = Rng::substream(seed, "gateways");
    std::vector<std::size_t> gateways;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      if (t.nodes[i].cls == NodeClass::gateway) gateways.push_back(i);
    }
    std::sort(gateways.begin(), gateways.end(),
              [&](std::size_t a, std::size_t b) { return t.nodes[a].id < t.nodes[b].id; });

    auto add_link = [&](const Node& gw, const Node& peer) {
      if (gw.id == peer.id || connects(t, gw.id, peer.id)) return;
      t.edges.push_back({gw.id, peer.id, "tcp", true});
    };

    std::size_t pair_index = 0;
    for (std::size_t a = 0; a < t.zones.size(); ++a) {
      for (std::size_t b = a + 1; b < t.zones.size(); ++b, ++pair_index) {
        for (std::uint32_t l = 0; l < recipe.inter_zone_gateways; ++l) {
          const Node& gw =
              t.nodes[gateways[(pair_index * recipe.inter_zone_gateways + l) % gateways.size()]];
          for (const auto* zone : {&t.zones[a], &t.zones[b]}) {
            if (*zone == gw.zone) continue;
            const auto& members = by_zone[*zone];
            if (members.empty()) continue;
            add_link(gw, t.nodes[members[links.below(members.size())]]);
          }
        }
      }
    }
  }

  std::set<std::string> tag_set;
  for (const auto& [id, cap] : registry) {
    if (cap.kind == CapabilityKind::attack) tag_set.insert(cap.technique_tag);
  }
  if (tag_set.empty()) tag_set.insert("T1190");
  const std::vector<std::string> tags(tag_set.begin(), tag_set.end());

  Rng vulns = Rng::substream(seed, "vulns");
  for (auto& node : t.nodes) {
    if (node.cls == NodeClass::gateway) continue;
    if (!(vulns.uniform() < recipe.vuln_rate)) continue;
    Vulnerability v;
    v.id = "vuln-" + node.id;
    v.technique_tag = tags[vulns.below(tags.size())];
    v.access = AccessRequirement::network;
    v.success_prob = kVulnSuccess[vulns.below(kVulnSuccess.size())];
    v.detection_prob = kVulnDetection[vulns.below(kVulnDetection.size())];
    v.gained_privilege = vulns.uniform() < kAdminVulnRate ? Privilege::admin : Privilege::user;
    node.vulnerability_ids.push_back(v.id);
    t.vulnerabilities.push_back(std::move(v));
  }

  Rng creds = Rng::substream(seed, "credentials");
  for (auto& node : t.nodes) {
    if (!(creds.uniform() < recipe.credential_rate)) continue;
    std::vector<std::string> peers;
    for (std::size_t i : by_zone[node.zone]) {
      if (t.nodes[i].id != node.id) peers.push_back(t.nodes[i].id);
    }
    if (peers.empty()) continue;
    Credential c{"cred-" + node.id, node.id, {peers[creds.below(peers.size())]}};
    node.credential_ids.push_back(c.id);
    t.credentials.push_back(std::move(c));
  }

  return t;
}

NetworkTopology resolve_topology(const ScenarioSpec& spec, const CapabilityRegistry& registry) {
  const auto& params = spec.scenario_parameters;
  if (params.explicit_topology) return *params.explicit_topology;
  if (params.recipe) return build_topology(*params.recipe, registry, params.seed);
  throw Error(Errc::InvariantViolation, "scenario has neither a recipe nor a topology");
}

ValidationReport validate_spec(const ScenarioSpec& spec, const CapabilityRegistry& registry) {
  ValidationReport report;
  for (std::size_t i = 0; i < spec.elements.capability_refs.size(); ++i) {
    const auto& ref = spec.elements.capability_refs[i];
    if (!registry.find(ref)) {
      report.errors.push_back({"UnresolvedCapability",
                               "capability '" + ref + "' is not in the registry",
                               "elements.capability_refs[" + std::to_string(i) + "]"});
    }
  }

  std::optional<NetworkTopology> topology;
  if (spec.scenario_parameters.explicit_topology) {
    topology = *spec.scenario_parameters.explicit_topology;
    check_topology(*topology, report, "scenario_parameters.explicit_topology");
  } else {
    try {
      topology = resolve_topology(spec, registry);
      check_topology(*topology, report, "scenario_parameters.recipe");
    } catch (const Error& e) {
      report.errors.push_back({"TopologyBuildFailed", e.what(), "scenario_parameters.recipe"});
    }
  }

  if (topology) {
    for (std::size_t i = 0; i < spec.objectives.size(); ++i) {
      const auto& target = spec.objectives[i].target;
      if (select_nodes(*topology, target).empty()) {
        report.errors.push_back({"ObjectiveTargetUnknown",
                                 "objective target " + target.describe() + " matches no node",
                                 "objectives[" + std::to_string(i) + "].target"});
      }
    }
  }
  return report;
}

}  // namespace rangesim
