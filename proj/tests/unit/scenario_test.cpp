#include <map>
#include <set>

#include <gtest/gtest.h>
#include "json.hpp"

#include "generators.hpp"
#include "oracles.hpp"
#include "rangesim/scenario.hpp"
#include "test_util.hpp"

namespace rangesim {
namespace {

using testing::Gen;

constexpr const char* kMinimal = R"({
  "schema_version": "1",
  "domain_context": {"domain_tag": "plant", "narrative": "small plant"},
  "problem_decomposition": [
    {"id": "p1", "description": "protect the controller", "related_asset_classes": ["controller"]}
  ],
  "scenario_parameters": {
    "recipe": {
      "node_counts": {"controller": 1, "workstation": 1},
      "zone_count": 1,
      "intra_zone_density": 1.0,
      "inter_zone_gateways": 0,
      "vuln_rate": 0.5,
      "credential_rate": 0.0
    },
    "seed": 9
  },
  "objectives": [
    {"actor": "attacker", "kind": "compromise", "target": {"class": "controller"}, "threshold": 1.0}
  ],
  "elements": {"asset_classes": ["controller"], "threat_actors": ["insider"], "capability_refs": ["phishing"]}
})";

std::string without_key(const std::string& doc, const std::string& key) {
  auto j = nlohmann::ordered_json::parse(doc);
  j.erase(key);
  return j.dump();
}

std::string with_field(const std::string& doc, const std::string& key, nlohmann::json value) {
  auto j = nlohmann::ordered_json::parse(doc);
  j[key] = value;
  return j.dump();
}

TEST(ParseScenario, MinimalDocumentPopulatesAllFiveSections) {
  const auto spec = parse_scenario(kMinimal);
  EXPECT_EQ(spec.schema_version, "1");
  EXPECT_EQ(spec.domain_context.domain_tag, "plant");
  EXPECT_EQ(spec.domain_context.narrative, "small plant");
  ASSERT_EQ(spec.problem_decomposition.size(), 1u);
  EXPECT_EQ(spec.problem_decomposition[0].related_asset_classes,
            std::vector<NodeClass>{NodeClass::controller});
  ASSERT_TRUE(spec.scenario_parameters.recipe.has_value());
  EXPECT_FALSE(spec.scenario_parameters.explicit_topology.has_value());
  EXPECT_EQ(spec.scenario_parameters.recipe->count(NodeClass::workstation), 1u);
  EXPECT_EQ(spec.scenario_parameters.seed, 9u);
  ASSERT_EQ(spec.objectives.size(), 1u);
  EXPECT_EQ(spec.objectives[0].target, TargetSelector::of_class(NodeClass::controller));
  EXPECT_EQ(spec.elements.capability_refs, std::vector<std::string>{"phishing"});
}

TEST(ParseScenario, MissingObjectivesSectionIsNamed) {
  try {
    parse_scenario(without_key(kMinimal, "objectives"));
    FAIL() << "expected MissingSection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingSection);
    EXPECT_EQ(e.detail(), "objectives");
  }
}

TEST(ParseScenario, BundledMarineRanchDocument) {
  const auto spec = parse_scenario(testing::slurp(testing::source_path("scenarios/marine_ranch.scenario.json")));
  EXPECT_EQ(spec.domain_context.domain_tag, "marine-ranch");
  const std::set<NodeClass> classes(spec.elements.asset_classes.begin(), spec.elements.asset_classes.end());
  for (auto cls : {NodeClass::sensor, NodeClass::controller, NodeClass::camera_server,
                   NodeClass::maintenance_endpoint}) {
    EXPECT_TRUE(classes.count(cls)) << to_string(cls);
  }
}

TEST(ParseScenario, RejectsMalformedAndUnknownInput) {
  EXPECT_ERRC(Errc::MalformedDocument, parse_scenario("{not json"));
  EXPECT_ERRC(Errc::UnknownField, parse_scenario(with_field(kMinimal, "extra", 1)));
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(with_field(kMinimal, "objectives", nlohmann::json::array())));
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(with_field(kMinimal, "schema_version", "2")));

  auto j = nlohmann::ordered_json::parse(kMinimal);
  j["objectives"][0]["threshold"] = 1.5;
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(j.dump()));

  j = nlohmann::ordered_json::parse(kMinimal);
  j["objectives"][0]["target"]["typo"] = "x";
  EXPECT_ERRC(Errc::UnknownField, parse_scenario(j.dump()));

  j = nlohmann::ordered_json::parse(kMinimal);
  j["problem_decomposition"].push_back(j["problem_decomposition"][0]);
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(j.dump()));

  j = nlohmann::ordered_json::parse(kMinimal);
  j["scenario_parameters"]["explicit_topology"] = {{"zones", {"z"}}, {"nodes", nlohmann::json::array()},
                                                   {"edges", nlohmann::json::array()}};
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(j.dump()));

  j = nlohmann::ordered_json::parse(kMinimal);
  j["scenario_parameters"]["recipe"]["node_counts"] = {{"controller", 0}};
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(j.dump()));

  j = nlohmann::ordered_json::parse(kMinimal);
  j["elements"]["capability_refs"] = {"bad ref with spaces"};
  EXPECT_ERRC(Errc::InvariantViolation, parse_scenario(j.dump()));
}

TEST(SerializeScenario, RoundTripAndByteStability) {
  const auto spec = parse_scenario(kMinimal);
  const auto text = serialize_scenario(spec);
  EXPECT_EQ(parse_scenario(text), spec);
  EXPECT_EQ(serialize_scenario(spec), text);
  EXPECT_EQ(serialize_scenario(parse_scenario(text)), text);
}

ScenarioSpec golden_explicit_spec() {
  ScenarioSpec s;
  s.domain_context = {"golden", "two hosts"};
  s.problem_decomposition = {{"keep-db", "keep the database", {NodeClass::data_server}}};
  NetworkTopology t;
  t.zones = {"office"};
  t.nodes = {{"db", NodeClass::data_server, "office", {{"postgres", 5432}}, {"v-db"}, {}, 80},
             {"ws", NodeClass::workstation, "office", {}, {}, {"c-ws"}, 10}};
  t.edges = {{"ws", "db", "tcp", false}};
  t.vulnerabilities = {{"v-db", "T1190", AccessRequirement::network, 0.7, 0.2, Privilege::admin}};
  t.credentials = {{"c-ws", "ws", {"db"}}};
  s.scenario_parameters.explicit_topology = t;
  s.objectives = {{Actor::attacker, ObjectiveKind::compromise, TargetSelector::node("db"), 1.0}};
  s.elements = {{NodeClass::data_server}, {"outsider"}, {"phishing", "exploit_vuln"}};
  return s;
}

TEST(SerializeScenario, ExplicitTopologyMatchesGoldenFile) {
  const auto text = serialize_scenario(golden_explicit_spec());
  testing::expect_golden("tests/golden/explicit_topology.scenario.json", text);
  const auto j = nlohmann::json::parse(text);
  ASSERT_TRUE(j["scenario_parameters"].contains("explicit_topology"));
  EXPECT_FALSE(j["scenario_parameters"].contains("recipe"));
}

TEST(ValidateSpec, UnresolvedCapability) {
  auto spec = parse_scenario(kMinimal);
  spec.elements.capability_refs = {"phishing", "no-such-cap"};
  const auto report = validate_spec(spec, builtin_registry());
  std::size_t unresolved = 0;
  for (const auto& f : report.errors) unresolved += f.code == "UnresolvedCapability";
  EXPECT_EQ(unresolved, 1u);
}

TEST(ValidateSpec, MarineRanchIsClean) {
  const auto spec = parse_scenario(testing::slurp(testing::source_path("scenarios/marine_ranch.scenario.json")));
  const auto report = validate_spec(spec, builtin_registry());
  EXPECT_TRUE(report.errors.empty()) << serialize_report(report);
}

TEST(ValidateSpec, StructuralFindings) {
  auto spec = golden_explicit_spec();
  auto& t = *spec.scenario_parameters.explicit_topology;
  t.nodes[1].id = "s1";
  t.nodes[0].id = "s1";
  auto codes = [&] {
    std::multiset<std::string> out;
    for (const auto& f : validate_spec(spec, builtin_registry()).errors) out.insert(f.code);
    return out;
  };
  EXPECT_TRUE(codes().count("DuplicateNodeId"));

  spec = golden_explicit_spec();
  spec.scenario_parameters.explicit_topology->edges.push_back({"ws", "ghost", "tcp", false});
  EXPECT_TRUE(codes().count("DanglingEdge"));

  spec = golden_explicit_spec();
  spec.objectives[0].target = TargetSelector::of_class(NodeClass::sensor);
  EXPECT_TRUE(codes().count("ObjectiveTargetUnknown"));

  spec = golden_explicit_spec();
  spec.scenario_parameters.explicit_topology->edges.clear();
  const auto report = validate_spec(spec, builtin_registry());
  EXPECT_TRUE(report.errors.empty());
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_EQ(report.warnings[0].code, "DisconnectedTopology");
}

TEST(BuildTopology, CountsAreExact) {
  TopologyRecipe r;
  r.count(NodeClass::sensor) = 2;
  r.count(NodeClass::controller) = 1;
  r.count(NodeClass::gateway) = 1;
  r.count(NodeClass::camera_server) = 1;
  r.count(NodeClass::maintenance_endpoint) = 1;
  r.zone_count = 2;
  r.inter_zone_gateways = 1;
  r.intra_zone_density = 0.5;
  r.vuln_rate = 0.5;
  const auto t = build_topology(r, builtin_registry(), 42);
  EXPECT_EQ(t.nodes.size(), 6u);
  std::map<NodeClass, std::uint32_t> counts;
  for (const auto& n : t.nodes) ++counts[n.cls];
  for (auto cls : kAllNodeClasses) EXPECT_EQ(counts[cls], r.count(cls));
  EXPECT_EQ(build_topology(r, builtin_registry(), 42), t);
  EXPECT_TRUE(testing::topology_problems(t).empty());
}

TEST(BuildTopology, Errors) {
  TopologyRecipe r;
  EXPECT_ERRC(Errc::EmptyRecipe, build_topology(r, builtin_registry(), 1));
  r.count(NodeClass::sensor) = 3;
  r.zone_count = 2;
  r.inter_zone_gateways = 1;
  EXPECT_ERRC(Errc::InsufficientGateways, build_topology(r, builtin_registry(), 1));
}

TEST(BuildTopology, ZonesAreRoundRobinAndInterZoneEdgesUseGateways) {
  TopologyRecipe r;
  r.count(NodeClass::sensor) = 3;
  r.count(NodeClass::gateway) = 1;
  r.count(NodeClass::workstation) = 2;
  r.zone_count = 3;
  r.inter_zone_gateways = 1;
  r.intra_zone_density = 1.0;
  const auto t = build_topology(r, builtin_registry(), 5);
  // Creation order: sensor-1..3, gateway-1, workstation-1..2.
  const std::vector<std::string> expected_zone = {"zone_1", "zone_2", "zone_3", "zone_1", "zone_2", "zone_3"};
  ASSERT_EQ(t.nodes.size(), expected_zone.size());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) EXPECT_EQ(t.nodes[i].zone, expected_zone[i]);
  for (const auto& e : t.edges) {
    const Node* a = find_node(t, e.src);
    const Node* b = find_node(t, e.dst);
    if (a->zone != b->zone) {
      EXPECT_TRUE(a->cls == NodeClass::gateway || b->cls == NodeClass::gateway) << e.src << "->" << e.dst;
    }
  }
}

// --- properties ---------------------------------------------------------------

TEST(ScenarioProperties, RoundTripOverGeneratedSpecs) {
  Gen g(1001);
  for (int i = 0; i < 300; ++i) {
    const auto spec = testing::random_spec(g);
    const auto text = serialize_scenario(spec);
    const auto back = parse_scenario(text);
    ASSERT_EQ(back, spec) << text;
    ASSERT_EQ(serialize_scenario(back), text);
  }
}

TEST(ScenarioProperties, BuildIsDeterministic) {
  Gen g(1002);
  const auto registry = builtin_registry();
  for (int i = 0; i < 20; ++i) {
    const auto recipe = testing::random_recipe(g);
    const std::uint64_t seed = g();
    const auto first = build_topology(recipe, registry, seed);
    for (int k = 0; k < 100; ++k) ASSERT_EQ(build_topology(recipe, registry, seed), first);
  }
}

TEST(ScenarioProperties, CountPreservationAndSoundness) {
  Gen g(1003);
  const auto registry = builtin_registry();
  for (int i = 0; i < 300; ++i) {
    const auto recipe = testing::random_recipe(g);
    const auto t = build_topology(recipe, registry, g());
    std::map<NodeClass, std::uint32_t> counts;
    for (const auto& n : t.nodes) ++counts[n.cls];
    for (auto cls : kAllNodeClasses) ASSERT_EQ(counts[cls], recipe.count(cls));
    const auto problems = testing::topology_problems(t);
    ASSERT_TRUE(problems.empty()) << problems.front();
    ValidationReport report;
    check_topology(t, report, "t");
    ASSERT_TRUE(report.errors.empty());
  }
}

TEST(ScenarioProperties, DensityIsMonotone) {
  Gen g(1004);
  const auto registry = builtin_registry();
  auto intra_edges = [](const NetworkTopology& t) {
    std::size_t n = 0;
    for (const auto& e : t.edges) n += find_node(t, e.src)->zone == find_node(t, e.dst)->zone;
    return n;
  };
  for (int i = 0; i < 100; ++i) {
    auto recipe = testing::random_recipe(g);
    recipe.inter_zone_gateways = 0;
    const std::uint64_t seed = g();
    std::size_t previous = 0;
    for (int step = 0; step <= 10; ++step) {
      recipe.intra_zone_density = step / 10.0;
      const auto count = intra_edges(build_topology(recipe, registry, seed));
      ASSERT_GE(count, previous);
      previous = count;
    }
  }
}

TEST(ScenarioProperties, GeneratedTopologiesRoundTrip) {
  Gen g(1005);
  for (int i = 0; i < 200; ++i) {
    const auto t = testing::random_topology(g);
    ASSERT_EQ(parse_topology(serialize_topology(t)), t);
  }
}

}  // namespace
}  // namespace rangesim
