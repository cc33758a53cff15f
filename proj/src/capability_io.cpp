#include <algorithm>

#include "json_support.hpp"
#include "rangesim/registry.hpp"

namespace rangesim {

using namespace json_support;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view to_string(GrantedPrivilege p) {
  switch (p) {
    case GrantedPrivilege::user: return "user";
    case GrantedPrivilege::admin: return "admin";
    case GrantedPrivilege::from_vulnerability: return "from_vulnerability";
  }
  return "?";
}

DefenseKind read_defense(ObjectReader& r, std::string_view key) {
  auto text = r.string(key);
  auto kind = parse_defense_kind(text);
  if (!kind) violation(r.path_of(key), "unknown defense kind '" + text + "'");
  return *kind;
}

Predicate read_predicate(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  const std::string name = r.string("predicate");
  Predicate out;
  if (name == "actor_has_foothold") {
    pred::ActorHasFoothold p{r.identifier("node")};
    if (const Json* min = r.optional("min_privilege")) {
      auto priv = parse_privilege(as_string(*min, r.path_of("min_privilege")));
      if (!priv) violation(r.path_of("min_privilege"), "unknown privilege");
      p.min_privilege = *priv;
    }
    out = p;
  } else if (name == "edge_exists") {
    out = pred::EdgeExists{r.identifier("src"), r.identifier("dst")};
  } else if (name == "node_has_vuln_with_access") {
    auto node = r.identifier("node");
    auto access = parse_access(r.string("access"));
    if (!access) violation(r.path_of("access"), "unknown access requirement");
    out = pred::NodeHasVulnWithAccess{node, *access};
  } else if (name == "credential_held") {
    out = pred::CredentialHeld{r.identifier("granting_access_to")};
  } else if (name == "defense_absent") {
    auto node = r.identifier("node");
    out = pred::DefenseAbsent{node, read_defense(r, "defense")};
  } else if (name == "defense_present") {
    auto node = r.identifier("node");
    out = pred::DefensePresent{node, read_defense(r, "defense")};
  } else if (name == "node_class_is") {
    pred::NodeClassIs p{r.identifier("node"), {}};
    const auto& classes = expect_array(r.required("classes"), r.path_of("classes"));
    for (std::size_t i = 0; i < classes.size(); ++i) {
      p.classes.push_back(as_node_class(classes[i], index(r.path_of("classes"), i)));
    }
    out = p;
  } else if (name == "node_not_compromised") {
    out = pred::NodeNotCompromised{r.identifier("node")};
  } else if (name == "asset_value_above") {
    auto node = r.identifier("node");
    out = pred::AssetValueAbove{node, static_cast<int>(r.integer("threshold", 0, 100))};
  } else {
    throw Error(Errc::UnknownPredicate, path + ": '" + name + "'");
  }
  r.finish();
  return out;
}

Effect read_effect(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  const std::string name = r.string("effect");
  Effect out;
  if (name == "compromise") {
    auto node = r.identifier("node");
    auto text = r.string("privilege");
    GrantedPrivilege priv = GrantedPrivilege::user;
    if (text == "user") {
      priv = GrantedPrivilege::user;
    } else if (text == "admin") {
      priv = GrantedPrivilege::admin;
    } else if (text == "from_vulnerability") {
      priv = GrantedPrivilege::from_vulnerability;
    } else {
      violation(r.path_of("privilege"), "unknown privilege '" + text + "'");
    }
    out = effect::Compromise{node, priv};
  } else if (name == "gain_credentials") {
    out = effect::GainCredentials{r.identifier("node")};
  } else if (name == "deploy") {
    auto node = r.identifier("node");
    out = effect::Deploy{node, read_defense(r, "defense")};
  } else if (name == "raise_alarm") {
    out = effect::RaiseAlarm{};
  } else if (name == "trap_actor") {
    out = effect::TrapActor{
        static_cast<std::uint32_t>(r.integer("duration_rounds", 1, 1'000'000))};
  } else if (name == "nullify_credential_theft") {
    out = effect::NullifyCredentialTheft{r.identifier("node")};
  } else if (name == "reveal_vulnerabilities") {
    out = effect::RevealVulnerabilities{r.identifier("node")};
  } else {
    throw Error(Errc::UnknownEffect, path + ": '" + name + "'");
  }
  r.finish();
  return out;
}

AtomicCapability read_capability(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  AtomicCapability cap;
  // The interface version is checked first so that a future-format file fails
  // with the version error rather than with an unknown field.
  cap.interface_version = r.string("interface_version");
  if (cap.interface_version != kInterfaceVersion) {
    throw Error(Errc::UnsupportedInterfaceVersion, r.path_of("interface_version") + ": '" +
                                                       cap.interface_version + "'");
  }
  cap.id = r.identifier("id");
  auto kind = parse_capability_kind(r.string("kind"));
  if (!kind) violation(r.path_of("kind"), "expected 'attack' or 'defense'");
  cap.kind = *kind;
  cap.name = r.string("name");
  cap.technique_tag = r.identifier("technique_tag");
  const auto& pre = expect_array(r.required("preconditions"), r.path_of("preconditions"));
  for (std::size_t i = 0; i < pre.size(); ++i) {
    cap.preconditions.push_back(read_predicate(pre[i], index(r.path_of("preconditions"), i)));
  }
  const auto& eff = expect_array(r.required("effects"), r.path_of("effects"));
  for (std::size_t i = 0; i < eff.size(); ++i) {
    cap.effects.push_back(read_effect(eff[i], index(r.path_of("effects"), i)));
  }
  cap.base_success_prob = r.fraction("base_success_prob");
  cap.detection_prob = r.fraction("detection_prob");
  cap.cost_units = static_cast<std::uint32_t>(r.integer("cost_units", 0, 1'000'000));
  r.finish();
  return cap;
}

OrderedJson write_predicate(const Predicate& p) {
  OrderedJson j;
  j["predicate"] = std::string(predicate_name(p));
  std::visit(overloaded{
                 [&](const pred::ActorHasFoothold& x) {
                   j["node"] = x.node;
                   j["min_privilege"] = std::string(to_string(x.min_privilege));
                 },
                 [&](const pred::EdgeExists& x) {
                   j["src"] = x.src;
                   j["dst"] = x.dst;
                 },
                 [&](const pred::NodeHasVulnWithAccess& x) {
                   j["node"] = x.node;
                   j["access"] = std::string(to_string(x.access));
                 },
                 [&](const pred::CredentialHeld& x) {
                   j["granting_access_to"] = x.granting_access_to;
                 },
                 [&](const pred::DefenseAbsent& x) {
                   j["node"] = x.node;
                   j["defense"] = std::string(to_string(x.defense));
                 },
                 [&](const pred::DefensePresent& x) {
                   j["node"] = x.node;
                   j["defense"] = std::string(to_string(x.defense));
                 },
                 [&](const pred::NodeClassIs& x) {
                   j["node"] = x.node;
                   j["classes"] = OrderedJson::array();
                   for (auto c : x.classes) j["classes"].push_back(std::string(to_string(c)));
                 },
                 [&](const pred::NodeNotCompromised& x) { j["node"] = x.node; },
                 [&](const pred::AssetValueAbove& x) {
                   j["node"] = x.node;
                   j["threshold"] = x.threshold;
                 },
             },
             p);
  return j;
}

OrderedJson write_effect(const Effect& e) {
  OrderedJson j;
  j["effect"] = std::string(effect_name(e));
  std::visit(overloaded{
                 [&](const effect::Compromise& x) {
                   j["node"] = x.node;
                   j["privilege"] = std::string(to_string(x.privilege));
                 },
                 [&](const effect::Deploy& x) {
                   j["node"] = x.node;
                   j["defense"] = std::string(to_string(x.defense));
                 },
                 [&](const effect::RaiseAlarm&) {},
                 [&](const effect::TrapActor& x) { j["duration_rounds"] = x.duration_rounds; },
                 [&](const auto& x) { j["node"] = x.node; },
             },
             e);
  return j;
}

}  // namespace

std::vector<AtomicCapability> parse_capability_document(std::string_view text) {
  Json doc = parse_text(text);
  std::vector<AtomicCapability> out;
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      out.push_back(read_capability(doc[i], index("", i)));
    }
  } else {
    out.push_back(read_capability(doc, ""));
  }
  for (const auto& cap : out) check_capability(cap);
  return out;
}

std::string serialize_capability(const AtomicCapability& cap) {
  OrderedJson j;
  j["id"] = cap.id;
  j["kind"] = std::string(to_string(cap.kind));
  j["name"] = cap.name;
  j["technique_tag"] = cap.technique_tag;
  j["preconditions"] = OrderedJson::array();
  for (const auto& p : cap.preconditions) j["preconditions"].push_back(write_predicate(p));
  j["effects"] = OrderedJson::array();
  for (const auto& e : cap.effects) j["effects"].push_back(write_effect(e));
  j["base_success_prob"] = cap.base_success_prob;
  j["detection_prob"] = cap.detection_prob;
  j["cost_units"] = cap.cost_units;
  j["interface_version"] = cap.interface_version;
  return dump(j);
}

std::string serialize_strategy(const DefenseStrategy& strategy) {
  OrderedJson j;
  j["capability_placements"] = OrderedJson::array();
  for (const auto& p : strategy.capability_placements) {
    OrderedJson item;
    item["capability_id"] = p.capability_id;
    item["target_node"] = p.target_node;
    j["capability_placements"].push_back(item);
  }
  return dump(j);
}

DefenseStrategy parse_strategy_document(std::string_view text) {
  Json doc = parse_text(text);
  ObjectReader r(doc, "");
  DefenseStrategy out;
  const auto& arr =
      expect_array(r.required("capability_placements"), r.path_of("capability_placements"));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader item(arr[i], index("capability_placements", i));
    auto cap = item.identifier("capability_id");
    out.capability_placements.push_back({cap, item.identifier("target_node")});
    item.finish();
  }
  r.finish();
  return out;
}

}  // namespace rangesim
