#include "rangesim/capability.hpp"

#include <algorithm>

#include "rangesim/state.hpp"

namespace rangesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view predicate_name(const Predicate& p) noexcept {
  return std::visit(
      overloaded{
          [](const pred::ActorHasFoothold&) -> std::string_view { return "actor_has_foothold"; },
          [](const pred::EdgeExists&) -> std::string_view { return "edge_exists"; },
          [](const pred::NodeHasVulnWithAccess&) -> std::string_view {
            return "node_has_vuln_with_access";
          },
          [](const pred::CredentialHeld&) -> std::string_view { return "credential_held"; },
          [](const pred::DefenseAbsent&) -> std::string_view { return "defense_absent"; },
          [](const pred::DefensePresent&) -> std::string_view { return "defense_present"; },
          [](const pred::NodeClassIs&) -> std::string_view { return "node_class_is"; },
          [](const pred::NodeNotCompromised&) -> std::string_view {
            return "node_not_compromised";
          },
          [](const pred::AssetValueAbove&) -> std::string_view { return "asset_value_above"; },
      },
      p);
}

std::vector<std::string> predicate_slots(const Predicate& p) {
  return std::visit(
      overloaded{
          [](const pred::EdgeExists& e) { return std::vector<std::string>{e.src, e.dst}; },
          [](const pred::CredentialHeld& c) {
            return std::vector<std::string>{c.granting_access_to};
          },
          [](const auto& other) { return std::vector<std::string>{other.node}; },
      },
      p);
}

std::string_view effect_name(const Effect& e) noexcept {
  return std::visit(
      overloaded{
          [](const effect::Compromise&) -> std::string_view { return "compromise"; },
          [](const effect::GainCredentials&) -> std::string_view { return "gain_credentials"; },
          [](const effect::Deploy&) -> std::string_view { return "deploy"; },
          [](const effect::RaiseAlarm&) -> std::string_view { return "raise_alarm"; },
          [](const effect::TrapActor&) -> std::string_view { return "trap_actor"; },
          [](const effect::NullifyCredentialTheft&) -> std::string_view {
            return "nullify_credential_theft";
          },
          [](const effect::RevealVulnerabilities&) -> std::string_view {
            return "reveal_vulnerabilities";
          },
      },
      e);
}

std::vector<std::string> effect_slots(const Effect& e) {
  return std::visit(
      overloaded{
          [](const effect::RaiseAlarm&) { return std::vector<std::string>{}; },
          [](const effect::TrapActor&) { return std::vector<std::string>{}; },
          [](const auto& other) { return std::vector<std::string>{other.node}; },
      },
      e);
}

std::vector<std::string> AtomicCapability::slots() const {
  std::vector<std::string> out;
  for (const auto& p : preconditions) {
    auto s = predicate_slots(p);
    out.insert(out.end(), s.begin(), s.end());
  }
  for (const auto& e : effects) {
    auto s = effect_slots(e);
    out.insert(out.end(), s.begin(), s.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool AtomicCapability::references_slot(std::string_view slot) const {
  auto all = slots();
  return std::find(all.begin(), all.end(), slot) != all.end();
}

CompromiseLevel SimulationState::level(std::string_view node) const {
  auto it = compromise.find(std::string(node));
  return it == compromise.end() ? CompromiseLevel::none : it->second;
}

bool SimulationState::has_defense(std::string_view node, DefenseKind kind) const {
  auto it = deployed.find(std::string(node));
  return it != deployed.end() && it->second.contains(kind);
}

SimulationState initial_state(const NetworkTopology& topology) {
  SimulationState state;
  for (const auto& node : topology.nodes) state.compromise[node.id] = CompromiseLevel::none;
  return state;
}

}  // namespace rangesim
