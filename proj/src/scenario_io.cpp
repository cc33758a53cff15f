#include <set>

#include "json_support.hpp"
#include "rangesim/scenario.hpp"

namespace rangesim {

using namespace json_support;

std::string_view to_string(ObjectiveKind kind) noexcept {
  switch (kind) {
    case ObjectiveKind::compromise: return "compromise";
    case ObjectiveKind::protect: return "protect";
    case ObjectiveKind::detect: return "detect";
  }
  return "?";
}

std::uint64_t TopologyRecipe::total_nodes() const {
  std::uint64_t total = 0;
  for (auto n : node_counts) total += n;
  return total;
}

namespace {

std::vector<NodeClass> read_classes(const Json& value, const std::string& path) {
  std::vector<NodeClass> out;
  const auto& arr = expect_array(value, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_node_class(arr[i], index(path, i)));
  return out;
}

OrderedJson write_classes(const std::vector<NodeClass>& classes) {
  OrderedJson arr = OrderedJson::array();
  for (auto c : classes) arr.push_back(std::string(to_string(c)));
  return arr;
}

OrderedJson write_strings(const std::vector<std::string>& items) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& s : items) arr.push_back(s);
  return arr;
}

std::vector<std::string> optional_ids(ObjectReader& r, std::string_view key) {
  const Json* v = r.optional(key);
  return v ? as_identifier_list(*v, r.path_of(key)) : std::vector<std::string>{};
}

Node read_node(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  Node node;
  node.id = r.identifier("id");
  node.cls = as_node_class(r.required("class"), r.path_of("class"));
  node.zone = r.identifier("zone");
  if (const Json* services = r.optional("services")) {
    const auto& arr = expect_array(*services, r.path_of("services"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader s(arr[i], index(r.path_of("services"), i));
      Service service;
      service.name = s.identifier("name");
      service.port = static_cast<int>(s.integer("port", 1, 65535));
      s.finish();
      node.services.push_back(std::move(service));
    }
  }
  node.vulnerability_ids = optional_ids(r, "vulnerability_ids");
  node.credential_ids = optional_ids(r, "credential_ids");
  node.asset_value = static_cast<int>(r.integer("asset_value", 0, 100));
  r.finish();
  return node;
}

Edge read_edge(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  Edge e;
  e.src = r.identifier("src");
  e.dst = r.identifier("dst");
  e.protocol = r.identifier("protocol");
  e.bidirectional = r.boolean("bidirectional");
  r.finish();
  return e;
}

Vulnerability read_vulnerability(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  Vulnerability v;
  v.id = r.identifier("id");
  v.technique_tag = r.identifier("technique_tag");
  auto access = parse_access(r.string("access_requirement"));
  if (!access) violation(r.path_of("access_requirement"), "unknown access requirement");
  v.access = *access;
  v.success_prob = r.fraction("success_prob");
  v.detection_prob = r.fraction("detection_prob");
  auto priv = parse_privilege(r.string("gained_privilege"));
  if (!priv) violation(r.path_of("gained_privilege"), "expected 'user' or 'admin'");
  v.gained_privilege = *priv;
  r.finish();
  return v;
}

Credential read_credential(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  Credential c;
  c.id = r.identifier("id");
  c.stored_on = r.identifier("stored_on");
  c.grants_access_to = as_identifier_list(r.required("grants_access_to"),
                                          r.path_of("grants_access_to"));
  if (c.grants_access_to.empty()) violation(r.path_of("grants_access_to"), "must be non-empty");
  r.finish();
  return c;
}

template <typename T, typename Fn>
std::vector<T> read_list(ObjectReader& r, std::string_view key, bool required, Fn fn) {
  const Json* v = required ? &r.required(key) : r.optional(key);
  std::vector<T> out;
  if (!v) return out;
  const auto& arr = expect_array(*v, r.path_of(key));
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(fn(arr[i], index(r.path_of(key), i)));
  return out;
}

NetworkTopology read_topology(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  NetworkTopology t;
  t.zones = as_identifier_list(r.required("zones"), r.path_of("zones"));
  t.nodes = read_list<Node>(r, "nodes", true, read_node);
  t.edges = read_list<Edge>(r, "edges", true, read_edge);
  t.vulnerabilities = read_list<Vulnerability>(r, "vulnerabilities", false, read_vulnerability);
  t.credentials = read_list<Credential>(r, "credentials", false, read_credential);
  r.finish();
  return t;
}

OrderedJson write_topology(const NetworkTopology& t) {
  OrderedJson j;
  j["zones"] = write_strings(t.zones);
  j["nodes"] = OrderedJson::array();
  for (const auto& n : t.nodes) {
    OrderedJson node;
    node["id"] = n.id;
    node["class"] = std::string(to_string(n.cls));
    node["zone"] = n.zone;
    node["services"] = OrderedJson::array();
    for (const auto& s : n.services) {
      OrderedJson service;
      service["name"] = s.name;
      service["port"] = s.port;
      node["services"].push_back(service);
    }
    node["vulnerability_ids"] = write_strings(n.vulnerability_ids);
    node["credential_ids"] = write_strings(n.credential_ids);
    node["asset_value"] = n.asset_value;
    j["nodes"].push_back(node);
  }
  j["edges"] = OrderedJson::array();
  for (const auto& e : t.edges) {
    OrderedJson edge;
    edge["src"] = e.src;
    edge["dst"] = e.dst;
    edge["protocol"] = e.protocol;
    edge["bidirectional"] = e.bidirectional;
    j["edges"].push_back(edge);
  }
  j["vulnerabilities"] = OrderedJson::array();
  for (const auto& v : t.vulnerabilities) {
    OrderedJson vuln;
    vuln["id"] = v.id;
    vuln["technique_tag"] = v.technique_tag;
    vuln["access_requirement"] = std::string(to_string(v.access));
    vuln["success_prob"] = v.success_prob;
    vuln["detection_prob"] = v.detection_prob;
    vuln["gained_privilege"] = std::string(to_string(v.gained_privilege));
    j["vulnerabilities"].push_back(vuln);
  }
  j["credentials"] = OrderedJson::array();
  for (const auto& c : t.credentials) {
    OrderedJson cred;
    cred["id"] = c.id;
    cred["stored_on"] = c.stored_on;
    cred["grants_access_to"] = write_strings(c.grants_access_to);
    j["credentials"].push_back(cred);
  }
  return j;
}

TopologyRecipe read_recipe(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  TopologyRecipe recipe;
  ObjectReader counts(r.required("node_counts"), r.path_of("node_counts"));
  for (auto cls : kAllNodeClasses) {
    const std::string key(to_string(cls));
    if (const Json* n = counts.optional(key)) {
      recipe.count(cls) =
          static_cast<std::uint32_t>(as_integer(*n, counts.path_of(key), 0, 1'000'000));
    }
  }
  counts.finish();
  if (recipe.total_nodes() < 1) violation(r.path_of("node_counts"), "sum must be at least 1");
  recipe.zone_count = static_cast<std::uint32_t>(r.integer("zone_count", 1, 10'000));
  recipe.intra_zone_density = r.fraction("intra_zone_density");
  recipe.inter_zone_gateways =
      static_cast<std::uint32_t>(r.integer("inter_zone_gateways", 0, 10'000));
  recipe.vuln_rate = r.fraction("vuln_rate");
  recipe.credential_rate = r.fraction("credential_rate");
  r.finish();
  return recipe;
}

OrderedJson write_recipe(const TopologyRecipe& recipe) {
  OrderedJson j;
  OrderedJson counts;
  for (auto cls : kAllNodeClasses) counts[std::string(to_string(cls))] = recipe.count(cls);
  j["node_counts"] = counts;
  j["zone_count"] = recipe.zone_count;
  j["intra_zone_density"] = recipe.intra_zone_density;
  j["inter_zone_gateways"] = recipe.inter_zone_gateways;
  j["vuln_rate"] = recipe.vuln_rate;
  j["credential_rate"] = recipe.credential_rate;
  return j;
}

TargetSelector read_selector(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  const bool by_node = r.has("node");
  const bool by_class = r.has("class");
  if (by_node == by_class) violation(path, "exactly one of 'node' or 'class' is required");
  TargetSelector selector = by_node ? TargetSelector::node(r.identifier("node"))
                                    : TargetSelector::of_class(as_node_class(
                                          r.required("class"), r.path_of("class")));
  r.finish();
  return selector;
}

Objective read_objective(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  Objective o;
  auto actor = parse_actor(r.string("actor"));
  if (!actor) violation(r.path_of("actor"), "expected 'attacker' or 'defender'");
  o.actor = *actor;
  auto kind = r.string("kind");
  if (kind == "compromise") {
    o.kind = ObjectiveKind::compromise;
  } else if (kind == "protect") {
    o.kind = ObjectiveKind::protect;
  } else if (kind == "detect") {
    o.kind = ObjectiveKind::detect;
  } else {
    violation(r.path_of("kind"), "unknown objective kind '" + kind + "'");
  }
  o.target = read_selector(r.required("target"), r.path_of("target"));
  o.threshold = r.fraction("threshold");
  r.finish();
  return o;
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view document) {
  Json doc = parse_text(document);
  ObjectReader r(doc, "");
  ScenarioSpec spec;

  // Sections are looked up up front so a missing one is reported by name
  // before any nested problem.
  for (auto section : {"schema_version", "domain_context", "problem_decomposition",
                       "scenario_parameters", "objectives", "elements"}) {
    if (!r.has(section)) throw Error(Errc::MissingSection, section);
  }

  spec.schema_version = r.string("schema_version");
  if (spec.schema_version != kSchemaVersion) {
    violation("schema_version", "unsupported version '" + spec.schema_version + "'");
  }

  {
    ObjectReader c(r.required("domain_context"), "domain_context");
    spec.domain_context.domain_tag = c.identifier("domain_tag");
    spec.domain_context.narrative = c.string("narrative");
    c.finish();
  }

  {
    const auto& arr = expect_array(r.required("problem_decomposition"), "problem_decomposition");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader p(arr[i], index("problem_decomposition", i));
      SubProblem sub;
      sub.id = p.identifier("id");
      sub.description = p.string("description");
      sub.related_asset_classes =
          read_classes(p.required("related_asset_classes"), p.path_of("related_asset_classes"));
      p.finish();
      if (!ids.insert(sub.id).second) {
        violation(p.path_of("id"), "duplicate sub-problem id '" + sub.id + "'");
      }
      spec.problem_decomposition.push_back(std::move(sub));
    }
  }

  {
    ObjectReader p(r.required("scenario_parameters"), "scenario_parameters");
    const Json* recipe = p.optional("recipe");
    const Json* topology = p.optional("explicit_topology");
    if ((recipe != nullptr) == (topology != nullptr)) {
      violation("scenario_parameters", "exactly one of 'recipe' or 'explicit_topology' is required");
    }
    if (recipe) {
      spec.scenario_parameters.recipe = read_recipe(*recipe, p.path_of("recipe"));
      if (const Json* seed = p.optional("seed")) {
        spec.scenario_parameters.seed = as_u64(*seed, p.path_of("seed"));
      }
    } else {
      if (p.has("seed")) violation(p.path_of("seed"), "only allowed together with 'recipe'");
      spec.scenario_parameters.explicit_topology =
          read_topology(*topology, p.path_of("explicit_topology"));
    }
    p.finish();
  }

  {
    const auto& arr = expect_array(r.required("objectives"), "objectives");
    if (arr.empty()) violation("objectives", "at least one objective is required");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      spec.objectives.push_back(read_objective(arr[i], index("objectives", i)));
    }
  }

  {
    ObjectReader e(r.required("elements"), "elements");
    spec.elements.asset_classes =
        read_classes(e.required("asset_classes"), e.path_of("asset_classes"));
    spec.elements.threat_actors =
        as_identifier_list(e.required("threat_actors"), e.path_of("threat_actors"));
    spec.elements.capability_refs =
        as_identifier_list(e.required("capability_refs"), e.path_of("capability_refs"));
    e.finish();
  }

  r.finish();
  return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  OrderedJson j;
  j["schema_version"] = spec.schema_version;
  j["domain_context"]["domain_tag"] = spec.domain_context.domain_tag;
  j["domain_context"]["narrative"] = spec.domain_context.narrative;
  j["problem_decomposition"] = OrderedJson::array();
  for (const auto& sub : spec.problem_decomposition) {
    OrderedJson item;
    item["id"] = sub.id;
    item["description"] = sub.description;
    item["related_asset_classes"] = write_classes(sub.related_asset_classes);
    j["problem_decomposition"].push_back(item);
  }
  OrderedJson params;
  if (spec.scenario_parameters.recipe) {
    params["recipe"] = write_recipe(*spec.scenario_parameters.recipe);
    params["seed"] = spec.scenario_parameters.seed;
  } else if (spec.scenario_parameters.explicit_topology) {
    params["explicit_topology"] = write_topology(*spec.scenario_parameters.explicit_topology);
  }
  j["scenario_parameters"] = params;
  j["objectives"] = OrderedJson::array();
  for (const auto& o : spec.objectives) {
    OrderedJson item;
    item["actor"] = std::string(to_string(o.actor));
    item["kind"] = std::string(to_string(o.kind));
    if (const auto* id = std::get_if<NodeId>(&o.target.value)) {
      item["target"]["node"] = *id;
    } else {
      item["target"]["class"] = std::string(to_string(std::get<NodeClass>(o.target.value)));
    }
    item["threshold"] = o.threshold;
    j["objectives"].push_back(item);
  }
  j["elements"]["asset_classes"] = write_classes(spec.elements.asset_classes);
  j["elements"]["threat_actors"] = write_strings(spec.elements.threat_actors);
  j["elements"]["capability_refs"] = write_strings(spec.elements.capability_refs);
  return dump(j);
}

NetworkTopology parse_topology(std::string_view document) {
  return read_topology(parse_text(document), "");
}

std::string serialize_topology(const NetworkTopology& topology) {
  return dump(write_topology(topology));
}

std::string serialize_report(const ValidationReport& report) {
  auto findings = [](const std::vector<Finding>& items) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& f : items) {
      OrderedJson item;
      item["code"] = f.code;
      item["message"] = f.message;
      item["location"] = f.location;
      arr.push_back(item);
    }
    return arr;
  };
  OrderedJson j;
  j["valid"] = report.valid();
  j["errors"] = findings(report.errors);
  j["warnings"] = findings(report.warnings);
  return dump(j);
}

}  // namespace rangesim
