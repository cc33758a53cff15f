#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rangesim/error.hpp"
#include "rangesim/rng.hpp"
#include "rangesim/simulation.hpp"
#include "rangesim/vocabulary.hpp"

namespace rangesim {
namespace {

template <class E, class Parse>
void expect_round_trip(const std::vector<E>& values, Parse parse) {
  std::set<std::string> names;
  for (E v : values) {
    const std::string name(to_string(v));
    EXPECT_FALSE(name.empty());
    EXPECT_TRUE(names.insert(name).second) << name;
    const auto parsed = parse(name);
    ASSERT_TRUE(parsed.has_value()) << name;
    EXPECT_EQ(*parsed, v);
  }
  EXPECT_FALSE(parse("definitely-not-a-value").has_value());
  EXPECT_FALSE(parse("").has_value());
}

TEST(Vocabulary, EnumNamesRoundTrip) {
  expect_round_trip(std::vector<NodeClass>(kAllNodeClasses.begin(), kAllNodeClasses.end()),
                    parse_node_class);
  expect_round_trip<AccessRequirement>(
      {AccessRequirement::network, AccessRequirement::adjacent, AccessRequirement::local}, parse_access);
  expect_round_trip<Privilege>({Privilege::user, Privilege::admin}, parse_privilege);
  expect_round_trip<CompromiseLevel>({CompromiseLevel::none, CompromiseLevel::user, CompromiseLevel::admin},
                                     parse_compromise_level);
  expect_round_trip<DefenseKind>({DefenseKind::honeypot, DefenseKind::shocktrap, DefenseKind::encryption,
                                  DefenseKind::scanner, DefenseKind::patch},
                                 parse_defense_kind);
  expect_round_trip<Actor>({Actor::attacker, Actor::defender}, parse_actor);
  expect_round_trip<CapabilityKind>({CapabilityKind::attack, CapabilityKind::defense}, parse_capability_kind);
  expect_round_trip<AttackerPolicy>(
      {AttackerPolicy::greedy_value, AttackerPolicy::cheapest_step, AttackerPolicy::uniform_random},
      parse_attacker_policy);
  expect_round_trip<DefenderPolicy>({DefenderPolicy::static_deployment, DefenderPolicy::reactive},
                                    parse_defender_policy);
  EXPECT_EQ(to_string(DefenderPolicy::static_deployment), "static");
}

TEST(Vocabulary, OrderedEnums) {
  EXPECT_LT(AccessRequirement::network, AccessRequirement::adjacent);
  EXPECT_LT(AccessRequirement::adjacent, AccessRequirement::local);
  EXPECT_LT(CompromiseLevel::none, CompromiseLevel::user);
  EXPECT_LT(CompromiseLevel::user, CompromiseLevel::admin);
  EXPECT_EQ(level_of(Privilege::user), CompromiseLevel::user);
  EXPECT_EQ(level_of(Privilege::admin), CompromiseLevel::admin);
}

TEST(Vocabulary, Identifiers) {
  for (const char* ok : {"a", "gw-1", "m.x", "m:1", "n_7", "Alpha"}) EXPECT_TRUE(is_identifier(ok)) << ok;
  for (const char* bad : {"", "has space", "slash/x", "ünï", "tab\t"}) EXPECT_FALSE(is_identifier(bad)) << bad;
}

TEST(Vocabulary, ErrorCarriesCodeAndPrefix) {
  const Error e(Errc::UnknownNode, "detail text");
  EXPECT_EQ(e.code(), Errc::UnknownNode);
  EXPECT_EQ(e.detail(), "detail text");
  EXPECT_EQ(std::string(e.what()), "UnknownNode: detail text");
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    differs = differs || x != c.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.draws(), 1000u);
}

TEST(Rng, UniformMatchesRawEngineBits) {
  Rng r(99);
  std::mt19937_64 engine(99);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(r.uniform(), static_cast<double>(engine() >> 11) / 9007199254740992.0);
  }
}

TEST(Rng, BelowAndBernoulliEdges) {
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    EXPECT_EQ(r.below(1), 0u);
    EXPECT_FALSE(r.bernoulli(0.0));
    EXPECT_TRUE(r.bernoulli(1.0));
  }
  EXPECT_EQ(r.draws(), 4000u);
}

TEST(Rng, SubstreamsAreIndependentAndStable) {
  auto a = Rng::substream(7, "edges");
  auto b = Rng::substream(7, "vulns");
  auto a2 = Rng::substream(7, "edges");
  EXPECT_NE(a.uniform(), b.uniform());
  a2.uniform();
  EXPECT_EQ(a.uniform(), a2.uniform());
  EXPECT_EQ(Rng::fnv1a(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(Rng::fnv1a("a"), 0xAF63DC4C8601EC8CULL);
  EXPECT_EQ(Rng::splitmix64(0), 0xE220A8397B1DCDAFULL);
}

}  // namespace
}  // namespace rangesim
