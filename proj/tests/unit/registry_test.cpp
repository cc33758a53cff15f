#include <algorithm>
#include <tuple>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "rangesim/registry.hpp"
#include "test_util.hpp"

namespace rangesim {
namespace {

using testing::Gen;

// ws (workstation) -> srv (data_server) with one vulnerability on srv.
NetworkTopology two_hosts(double success, double detection, AccessRequirement access = AccessRequirement::network) {
  NetworkTopology t;
  t.zones = {"z"};
  t.nodes = {{"srv", NodeClass::data_server, "z", {}, {"v1"}, {}, 50},
             {"ws", NodeClass::workstation, "z", {}, {}, {"c1"}, 5}};
  t.edges = {{"ws", "srv", "tcp", false}};
  t.vulnerabilities = {{"v1", "T1190", access, success, detection, Privilege::admin}};
  t.credentials = {{"c1", "ws", {"srv"}}};
  return t;
}

SimulationState with_foothold(const NetworkTopology& t, const NodeId& node,
                              CompromiseLevel level = CompromiseLevel::user) {
  auto s = initial_state(t);
  s.compromise[node] = level;
  s.footholds.insert(node);
  s.compromised_at[node] = 0;
  return s;
}

const Binding kHop{{"target", "srv"}, {"source", "ws"}};

TEST(Register, AddsWithoutTouchingTheInput) {
  const auto base = builtin_registry();
  EXPECT_EQ(base.size(), 10u);
  auto cap = *base.find("phishing");
  cap.id = "phishing_v2";
  const auto extended = register_capability(base, cap);
  EXPECT_EQ(base.size(), 10u);
  EXPECT_EQ(base.find("phishing_v2"), nullptr);
  EXPECT_EQ(extended.size(), 11u);
  ASSERT_NE(extended.find("phishing_v2"), nullptr);
  EXPECT_EQ(*extended.find("phishing_v2"), cap);
}

TEST(Register, RejectsInvalidCapabilities) {
  const auto base = builtin_registry();
  EXPECT_ERRC(Errc::DuplicateId, register_capability(base, *base.find("phishing")));

  auto cap = *base.find("phishing");
  cap.id = "x1";
  cap.interface_version = "cap-0";
  EXPECT_ERRC(Errc::UnsupportedInterfaceVersion, register_capability(base, cap));

  cap = *base.find("phishing");
  cap.id = "x2";
  cap.effects.push_back(effect::Deploy{"target", DefenseKind::honeypot});
  EXPECT_ERRC(Errc::KindEffectMismatch, register_capability(base, cap));

  cap = *base.find("honeypot");
  cap.id = "x3";
  cap.effects.push_back(effect::Compromise{"target", GrantedPrivilege::user});
  EXPECT_ERRC(Errc::KindEffectMismatch, register_capability(base, cap));

  cap = *base.find("phishing");
  cap.id = "x4";
  cap.base_success_prob = 1.5;
  EXPECT_ERRC(Errc::InvariantViolation, register_capability(base, cap));

  cap = *base.find("phishing");
  cap.id = "x5";
  cap.preconditions.push_back(pred::NodeNotCompromised{"victim"});
  EXPECT_ERRC(Errc::InvariantViolation, register_capability(base, cap));
}

TEST(CapabilityDocument, RoundTripsEveryBuiltin) {
  for (const auto& [id, cap] : builtin_registry()) {
    const auto parsed = parse_capability_document(serialize_capability(cap));
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0], cap) << id;
  }
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

TEST(CapabilityDocument, UnknownVocabularyIsRejected) {
  const auto doc = serialize_capability(*builtin_registry().find("exploit_vuln"));
  EXPECT_ERRC(Errc::UnknownPredicate, parse_capability_document(replace_once(doc, "\"edge_exists\"", "\"edge_teleports\"")));
  EXPECT_ERRC(Errc::UnknownEffect, parse_capability_document(replace_once(doc, "\"compromise\"", "\"obliterate\"")));
  EXPECT_ERRC(Errc::MalformedDocument, parse_capability_document("[{"));
  const auto array = parse_capability_document("[" + doc + "," + replace_once(doc, "\"exploit_vuln\"", "\"x\"") + "]");
  ASSERT_EQ(array.size(), 2u);
  EXPECT_EQ(array[1].id, "x");
}

TEST(Preconditions, MatchReferenceOnExamples) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(0.7, 0.2);
  const auto fresh = initial_state(t);
  const auto held = with_foothold(t, "ws");

  auto check = [&](const std::string& cap, const SimulationState& s, const Binding& b,
                   std::optional<std::string> expected_failure) {
    const auto r = evaluate_preconditions(*reg.find(cap), s, t, b);
    EXPECT_EQ(r.holds, !expected_failure.has_value()) << cap;
    if (expected_failure) {
      ASSERT_TRUE(r.first_failed.has_value());
      EXPECT_EQ(predicate_name(*r.first_failed), *expected_failure) << cap;
    }
  };
  check("phishing", fresh, {{"target", "ws"}}, std::nullopt);
  check("phishing", fresh, {{"target", "srv"}}, "node_class_is");
  check("phishing", held, {{"target", "ws"}}, "node_not_compromised");
  check("exploit_vuln", fresh, kHop, "actor_has_foothold");
  check("exploit_vuln", held, kHop, std::nullopt);
  check("exploit_vuln", held, {{"target", "ws"}, {"source", "srv"}}, "actor_has_foothold");
  check("lateral_move_with_cred", held, kHop, "credential_held");
  auto stolen = held;
  stolen.credentials_held.insert("c1");
  check("lateral_move_with_cred", stolen, kHop, std::nullopt);
  check("credential_theft", held, {{"target", "ws"}}, "actor_has_foothold");
  check("credential_theft", with_foothold(t, "ws", CompromiseLevel::admin), {{"target", "ws"}}, std::nullopt);
  check("exfiltrate", held, {{"target", "ws"}}, std::nullopt);
  auto trapped = fresh;
  trapped.deployed["srv"].insert(DefenseKind::shocktrap);
  check("shocktrap", trapped, {{"target", "srv"}}, "defense_absent");
  check("honeypot", trapped, {{"target", "srv"}}, std::nullopt);
}

TEST(Preconditions, AccessOrderAndPatch) {
  const auto reg = builtin_registry();
  const auto& exploit = *reg.find("exploit_vuln");
  for (auto [access, holds] : {std::pair{AccessRequirement::network, true}, std::pair{AccessRequirement::adjacent, true},
                               std::pair{AccessRequirement::local, false}}) {
    const auto t = two_hosts(0.7, 0.2, access);
    EXPECT_EQ(evaluate_preconditions(exploit, with_foothold(t, "ws"), t, kHop).holds, holds)
        << to_string(access);
  }
  const auto t = two_hosts(0.7, 0.2);
  auto patched = with_foothold(t, "ws");
  patched.deployed["srv"].insert(DefenseKind::patch);
  EXPECT_FALSE(evaluate_preconditions(exploit, patched, t, kHop).holds);

  auto two_vulns = t;
  two_vulns.nodes[0].vulnerability_ids.push_back("v2");
  two_vulns.vulnerabilities.push_back({"v2", "T1210", AccessRequirement::network, 0.3, 0.1, Privilege::user});
  const auto odds = effective_odds(exploit, two_vulns, kHop, &patched);
  EXPECT_DOUBLE_EQ(odds.success, 0.3);
  ASSERT_NE(odds.vulnerability, nullptr);
  EXPECT_EQ(odds.vulnerability->id, "v2");
  EXPECT_DOUBLE_EQ(effective_odds(exploit, two_vulns, kHop, nullptr).success, 0.7);
}

TEST(Preconditions, UnboundSlotThrows) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(1.0, 0.0);
  EXPECT_ERRC(Errc::UnboundSlot,
              evaluate_preconditions(*reg.find("exploit_vuln"), initial_state(t), t, {{"target", "srv"}}));
  Rng rng(1);
  EXPECT_ERRC(Errc::UnboundSlot, apply_capability(initial_state(t), *reg.find("phishing"), {}, t, rng));
}

TEST(Apply, CertainSuccessCompromisesWithVulnerabilityPrivilege) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(1.0, 0.0);
  auto s = with_foothold(t, "ws");
  s.round = 4;
  Rng rng(11);
  const auto r = apply_capability(s, *reg.find("exploit_vuln"), kHop, t, rng);
  EXPECT_TRUE(r.outcome.success);
  EXPECT_FALSE(r.outcome.detected);
  EXPECT_EQ(r.outcome.trapped_for, 0u);
  EXPECT_EQ(r.state.level("srv"), CompromiseLevel::admin);
  EXPECT_TRUE(r.state.footholds.count("srv"));
  EXPECT_EQ(r.state.compromised_at.at("srv"), 4u);
  EXPECT_TRUE(r.state.alarms.empty());
  EXPECT_EQ(rng.draws(), 2u);
  EXPECT_EQ(s.level("srv"), CompromiseLevel::none);
}

TEST(Apply, CertainFailureLeavesStateButMayAlarm) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(0.0, 1.0);
  const auto s = with_foothold(t, "ws");
  Rng rng(11);
  const auto r = apply_capability(s, *reg.find("exploit_vuln"), kHop, t, rng);
  EXPECT_FALSE(r.outcome.success);
  EXPECT_TRUE(r.outcome.detected);
  EXPECT_EQ(r.state.level("srv"), CompromiseLevel::none);
  ASSERT_EQ(r.state.alarms.size(), 1u);
  EXPECT_EQ(r.state.alarms[0], (Alarm{0, "srv"}));
  EXPECT_EQ(rng.draws(), 2u);
}

TEST(Apply, ShocktrapBlocksDetectsAndTraps) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(1.0, 0.0);
  auto s = with_foothold(t, "ws");
  s.round = 3;
  s.deployed["srv"].insert(DefenseKind::shocktrap);
  Rng rng(2);
  const auto r = apply_capability(s, *reg.find("exploit_vuln"), kHop, t, rng);
  EXPECT_FALSE(r.outcome.success);
  EXPECT_TRUE(r.outcome.detected);
  EXPECT_EQ(r.outcome.trapped_for, 2u);
  EXPECT_EQ(r.state.level("srv"), CompromiseLevel::none);
  // Rounds 4 and 5 are skipped.
  EXPECT_EQ(r.state.trapped_until, 6u);
  EXPECT_EQ(rng.draws(), 3u);
}

TEST(Apply, HoneypotDeceives) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(1.0, 0.0);
  auto s = with_foothold(t, "ws");
  s.deployed["srv"].insert(DefenseKind::honeypot);
  std::size_t detected = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto r = apply_capability(s, *reg.find("exploit_vuln"), kHop, t, rng);
    EXPECT_TRUE(r.outcome.success);
    EXPECT_EQ(r.state.level("srv"), CompromiseLevel::none);
    EXPECT_EQ(rng.draws(), 3u);
    detected += r.outcome.detected;
  }
  EXPECT_GT(detected, 150u);
  EXPECT_LT(detected, 200u);

  s.deployed["srv"].insert(DefenseKind::shocktrap);
  Rng rng(0);
  apply_capability(s, *reg.find("exploit_vuln"), kHop, t, rng);
  EXPECT_EQ(rng.draws(), 4u);
}

TEST(Apply, EncryptionNullifiesCredentialTheft) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(1.0, 0.0);
  auto s = with_foothold(t, "ws", CompromiseLevel::admin);
  auto theft = *reg.find("credential_theft");
  theft.base_success_prob = 1.0;
  theft.detection_prob = 0.0;
  Rng rng(1);
  EXPECT_EQ(apply_capability(s, theft, {{"target", "ws"}}, t, rng).state.credentials_held,
            std::set<std::string>{"c1"});
  s.deployed["ws"].insert(DefenseKind::encryption);
  EXPECT_TRUE(apply_capability(s, theft, {{"target", "ws"}}, t, rng).state.credentials_held.empty());
}

TEST(Apply, DefenseDeploysAndViolatedPreconditionThrows) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(1.0, 0.0);
  Rng rng(1);
  const auto r = apply_capability(initial_state(t), *reg.find("honeypot"), {{"target", "srv"}}, t, rng);
  EXPECT_TRUE(r.outcome.success);
  EXPECT_TRUE(r.state.has_defense("srv", DefenseKind::honeypot));
  EXPECT_ERRC(Errc::PreconditionViolated,
              apply_capability(r.state, *reg.find("honeypot"), {{"target", "srv"}}, t, rng));
  EXPECT_ERRC(Errc::PreconditionViolated, apply_capability(initial_state(t), *reg.find("exploit_vuln"), kHop, t, rng));
}

TEST(Applicable, OrderedByCostThenIdThenTargetThenSource) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(0.7, 0.2);
  auto s = with_foothold(t, "ws", CompromiseLevel::admin);
  s.credentials_held.insert("c1");
  const auto c = applicable_capabilities(reg, s, t, Actor::attacker, {"ws", "srv", "ws"});
  std::vector<std::string> keys;
  for (const auto& x : c) keys.push_back(x.key());
  const std::vector<std::string> expected = {"lateral_move_with_cred|srv|ws", "credential_theft|ws|",
                                             "exploit_vuln|srv|ws", "exfiltrate|ws|"};
  EXPECT_EQ(keys, expected);

  const auto d = applicable_capabilities(reg, initial_state(t), t, Actor::defender, {"srv"});
  std::vector<std::string> dkeys;
  for (const auto& x : d) dkeys.push_back(x.key());
  EXPECT_EQ(dkeys, (std::vector<std::string>{"patch|srv|", "vuln_scan|srv|", "data_encryption|srv|",
                                             "honeypot|srv|", "shocktrap|srv|"}));
}

TEST(Compose, ExamplesAndErrors) {
  const auto reg = builtin_registry();
  const auto t = two_hosts(0.5, 0.5);
  const std::vector<Placement> ok = {{"honeypot", "srv"}, {"shocktrap", "srv"}, {"honeypot", "ws"}};
  EXPECT_EQ(compose_strategy(reg, ok, &t).capability_placements, ok);
  EXPECT_ERRC(Errc::UnknownCapability, compose_strategy(reg, {{"moat", "srv"}}));
  EXPECT_ERRC(Errc::KindMismatch, compose_strategy(reg, {{"phishing", "srv"}}));
  EXPECT_ERRC(Errc::DuplicatePlacement, compose_strategy(reg, {{"patch", "srv"}, {"patch", "srv"}}));
  EXPECT_ERRC(Errc::UnknownNode, compose_strategy(reg, {{"patch", "ghost"}}, &t));
  EXPECT_NO_THROW(compose_strategy(reg, {{"patch", "ghost"}}));

  const auto strategy = compose_strategy(reg, ok, &t);
  EXPECT_EQ(parse_strategy_document(serialize_strategy(strategy)), strategy);
}

// --- properties ---------------------------------------------------------------

std::vector<std::optional<NodeId>> sources_for(const AtomicCapability& cap, const NetworkTopology& t,
                                               const NodeId& target) {
  if (!cap.references_slot(kSourceSlot)) return {std::nullopt};
  std::vector<std::optional<NodeId>> out;
  for (const auto& n : t.nodes) {
    if (n.id != target) out.push_back(n.id);
  }
  return out;
}

TEST(RegistryProperties, PreconditionsAgreeWithReference) {
  Gen g(2001);
  const auto reg = builtin_registry();
  std::size_t checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto t = testing::random_topology(g);
    const auto s = testing::random_state(g, t);
    for (const auto& [id, cap] : reg) {
      for (const auto& target : t.nodes) {
        for (const auto& source : sources_for(cap, t, target.id)) {
          Binding b{{"target", target.id}};
          if (source) b["source"] = *source;
          const auto actual = evaluate_preconditions(cap, s, t, b);
          const auto expected = testing::reference_preconditions(id, s, t, target.id, source);
          ASSERT_EQ(actual.holds, expected.holds) << id << " " << target.id;
          if (!expected.holds) {
            ASSERT_EQ(std::string(predicate_name(*actual.first_failed)), *expected.first_failed) << id;
          }
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 10000u);
}

TEST(RegistryProperties, DrawBudgetAndStateDiscipline) {
  Gen g(2002);
  const auto reg = builtin_registry();
  for (int i = 0; i < 300; ++i) {
    const auto t = testing::random_topology(g);
    const auto s = testing::random_state(g, t);
    std::vector<NodeId> domain;
    for (const auto& n : t.nodes) domain.push_back(n.id);
    for (auto actor : {Actor::attacker, Actor::defender}) {
      for (const auto& c : applicable_capabilities(reg, s, t, actor, domain)) {
        Rng rng(g());
        const auto r = apply_capability(s, *c.capability, c.binding, t, rng);
        std::uint64_t expected = 2;
        if (actor == Actor::attacker) {
          expected += s.has_defense(c.target(), DefenseKind::honeypot);
          expected += s.has_defense(c.target(), DefenseKind::shocktrap);
        }
        ASSERT_EQ(rng.draws(), expected) << c.key();
        if (!r.outcome.success) {
          ASSERT_EQ(r.state.compromise, s.compromise) << c.key();
        }
        for (const auto& [node, level] : s.compromise) ASSERT_GE(r.state.level(node), level);
        ASSERT_GE(r.state.alarms.size(), s.alarms.size());
        ASSERT_EQ(r.state.alarms.size() - s.alarms.size(), r.outcome.detected ? 1u : 0u);
        if (actor == Actor::attacker && s.has_defense(c.target(), DefenseKind::shocktrap)) {
          ASSERT_TRUE(r.outcome.detected);
          ASSERT_FALSE(r.outcome.success);
          ASSERT_EQ(r.outcome.trapped_for, kShocktrapTrapRounds);
        }
      }
    }
  }
}

TEST(RegistryProperties, ApplicableCandidatesAreExactlyThoseWhosePreconditionsHold) {
  Gen g(2003);
  const auto reg = builtin_registry();
  for (int i = 0; i < 200; ++i) {
    const auto t = testing::random_topology(g);
    const auto s = testing::random_state(g, t);
    std::vector<NodeId> domain;
    for (const auto& n : t.nodes) domain.push_back(n.id);
    std::vector<std::string> expected;
    for (const auto& [id, cap] : reg) {
      if (cap.kind != CapabilityKind::attack) continue;
      for (const auto& target : t.nodes) {
        for (const auto& source : sources_for(cap, t, target.id)) {
          if (testing::reference_preconditions(id, s, t, target.id, source).holds) {
            expected.push_back(id + "|" + target.id + "|" + source.value_or(""));
          }
        }
      }
    }
    std::vector<std::string> actual;
    const auto candidates = applicable_capabilities(reg, s, t, Actor::attacker, domain);
    for (const auto& c : candidates) actual.push_back(c.key());
    ASSERT_TRUE(std::is_sorted(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return std::make_tuple(a.capability->cost_units, a.capability->id, a.target(), a.key()) <
             std::make_tuple(b.capability->cost_units, b.capability->id, b.target(), b.key());
    }));
    std::sort(actual.begin(), actual.end());
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(actual, expected);
  }
}

}  // namespace
}  // namespace rangesim
