#include "rangesim/registry.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "rangesim/error.hpp"

namespace rangesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const NodeId& bound(const Binding& binding, const std::string& slot) {
  auto it = binding.find(slot);
  if (it == binding.end()) throw Error(Errc::UnboundSlot, "slot '" + slot + "' is not bound");
  return it->second;
}

bool holds(const Predicate& predicate, const SimulationState& state,
           const NetworkTopology& topology, const Binding& binding) {
  return std::visit(
      overloaded{
          [&](const pred::ActorHasFoothold& p) {
            const auto& node = bound(binding, p.node);
            return state.footholds.contains(node) &&
                   state.level(node) >= level_of(p.min_privilege);
          },
          [&](const pred::EdgeExists& p) {
            return connects(topology, bound(binding, p.src), bound(binding, p.dst));
          },
          [&](const pred::NodeHasVulnWithAccess& p) {
            const Node* node = find_node(topology, bound(binding, p.node));
            return node && best_vulnerability(topology, *node, p.access, &state) != nullptr;
          },
          [&](const pred::CredentialHeld& p) {
            const auto& node = bound(binding, p.granting_access_to);
            return std::any_of(state.credentials_held.begin(), state.credentials_held.end(),
                               [&](const std::string& cid) {
                                 const Credential* c = find_credential(topology, cid);
                                 return c && std::find(c->grants_access_to.begin(),
                                                       c->grants_access_to.end(),
                                                       node) != c->grants_access_to.end();
                               });
          },
          [&](const pred::DefenseAbsent& p) {
            return !state.has_defense(bound(binding, p.node), p.defense);
          },
          [&](const pred::DefensePresent& p) {
            return state.has_defense(bound(binding, p.node), p.defense);
          },
          [&](const pred::NodeClassIs& p) {
            const Node* node = find_node(topology, bound(binding, p.node));
            return node && std::find(p.classes.begin(), p.classes.end(), node->cls) !=
                               p.classes.end();
          },
          [&](const pred::NodeNotCompromised& p) {
            return state.level(bound(binding, p.node)) == CompromiseLevel::none;
          },
          [&](const pred::AssetValueAbove& p) {
            const Node* node = find_node(topology, bound(binding, p.node));
            return node && node->asset_value > p.threshold;
          },
      },
      predicate);
}

void require_slots_bound(const AtomicCapability& cap, const Binding& binding) {
  for (const auto& slot : cap.slots()) bound(binding, slot);
}

std::string optional_slot(const Binding& binding, std::string_view slot) {
  auto it = binding.find(slot);
  return it == binding.end() ? std::string{} : it->second;
}

}  // namespace

const AtomicCapability* CapabilityRegistry::find(std::string_view id) const {
  auto it = caps_.find(id);
  return it == caps_.end() ? nullptr : &it->second;
}

void check_capability(const AtomicCapability& cap) {
  if (cap.interface_version != kInterfaceVersion) {
    throw Error(Errc::UnsupportedInterfaceVersion,
                "capability '" + cap.id + "' declares interface '" + cap.interface_version + "'");
  }
  if (!is_identifier(cap.id)) {
    throw Error(Errc::InvariantViolation, "capability id '" + cap.id + "' is not an identifier");
  }
  if (!(cap.base_success_prob >= 0.0 && cap.base_success_prob <= 1.0) ||
      !(cap.detection_prob >= 0.0 && cap.detection_prob <= 1.0)) {
    throw Error(Errc::InvariantViolation,
                "capability '" + cap.id + "' has a probability outside [0,1]");
  }
  for (const auto& slot : cap.slots()) {
    if (slot != kTargetSlot && slot != kSourceSlot) {
      throw Error(Errc::InvariantViolation,
                  "capability '" + cap.id + "' references unknown slot '" + slot + "'");
    }
  }
  for (const auto& p : cap.preconditions) {
    if (const auto* c = std::get_if<pred::NodeClassIs>(&p); c && c->classes.empty()) {
      throw Error(Errc::InvariantViolation,
                  "capability '" + cap.id + "': node_class_is needs at least one class");
    }
  }
  for (const auto& e : cap.effects) {
    if (cap.kind == CapabilityKind::attack && std::holds_alternative<effect::Deploy>(e)) {
      throw Error(Errc::KindEffectMismatch,
                  "attack capability '" + cap.id + "' contains a deploy effect");
    }
    if (cap.kind == CapabilityKind::defense && std::holds_alternative<effect::Compromise>(e)) {
      throw Error(Errc::KindEffectMismatch,
                  "defense capability '" + cap.id + "' contains a compromise effect");
    }
    if (const auto* t = std::get_if<effect::TrapActor>(&e); t && t->duration_rounds < 1) {
      throw Error(Errc::InvariantViolation,
                  "capability '" + cap.id + "': trap duration must be at least 1 round");
    }
  }
}

CapabilityRegistry register_capability(const CapabilityRegistry& registry,
                                       AtomicCapability cap) {
  check_capability(cap);
  if (registry.find(cap.id)) {
    throw Error(Errc::DuplicateId, "capability '" + cap.id + "' is already registered");
  }
  CapabilityRegistry out = registry;
  auto id = cap.id;
  out.caps_.emplace(std::move(id), std::move(cap));
  return out;
}

CapabilityRegistry builtin_registry() {
  using namespace pred;
  const std::string target{kTargetSlot};
  const std::string source{kSourceSlot};

  auto attack = [](std::string id, std::string name, std::string tag, double p, double d,
                   std::uint32_t cost, std::vector<Predicate> pre, std::vector<Effect> eff) {
    return AtomicCapability{std::move(id), CapabilityKind::attack, std::move(name),
                            std::move(tag), std::move(pre), std::move(eff), p, d, cost,
                            std::string(kInterfaceVersion)};
  };
  auto defense = [&](std::string id, std::string name, std::string tag, std::uint32_t cost,
                     DefenseKind kind, Effect eff) {
    return AtomicCapability{std::move(id),
                            CapabilityKind::defense,
                            std::move(name),
                            std::move(tag),
                            {DefenseAbsent{target, kind}},
                            {std::move(eff)},
                            1.0,
                            0.0,
                            cost,
                            std::string(kInterfaceVersion)};
  };

  std::vector<AtomicCapability> caps = {
      attack("phishing", "Spear phishing", "T1566", 0.4, 0.1, 1,
             {NodeClassIs{target, {NodeClass::workstation, NodeClass::maintenance_endpoint}},
              NodeNotCompromised{target}},
             {effect::Compromise{target, GrantedPrivilege::user}}),
      attack("exploit_vuln", "Exploit reachable vulnerability", "T1190", 0.5, 0.2, 2,
             {ActorHasFoothold{source, Privilege::user}, EdgeExists{source, target},
              NodeHasVulnWithAccess{target, AccessRequirement::adjacent},
              NodeNotCompromised{target}},
             {effect::Compromise{target, GrantedPrivilege::from_vulnerability}}),
      attack("lateral_move_with_cred", "Lateral movement with valid credentials", "T1078", 0.8,
             0.1, 1,
             {ActorHasFoothold{source, Privilege::user}, EdgeExists{source, target},
              CredentialHeld{target}, NodeNotCompromised{target}},
             {effect::Compromise{target, GrantedPrivilege::user}}),
      attack("credential_theft", "Credential dumping", "T1003", 0.7, 0.2, 2,
             {ActorHasFoothold{target, Privilege::admin}}, {effect::GainCredentials{target}}),
      attack("exfiltrate", "Exfiltrate asset data", "T1041", 0.6, 0.3, 3,
             {ActorHasFoothold{target, Privilege::user}, AssetValueAbove{target, 0}}, {}),
      defense("honeypot", "Honeypot", "D3-DE", 2, DefenseKind::honeypot,
              effect::Deploy{target, DefenseKind::honeypot}),
      defense("shocktrap", "Shocktrap", "D3-DT", 3, DefenseKind::shocktrap,
              effect::Deploy{target, DefenseKind::shocktrap}),
      defense("vuln_scan", "Vulnerability scanning", "D3-VS", 1, DefenseKind::scanner,
              effect::RevealVulnerabilities{target}),
      defense("data_encryption", "Data encryption", "D3-FE", 2, DefenseKind::encryption,
              effect::NullifyCredentialTheft{target}),
      defense("patch", "Patch vulnerability", "D3-SU", 1, DefenseKind::patch,
              effect::Deploy{target, DefenseKind::patch}),
  };

  CapabilityRegistry registry;
  for (auto& cap : caps) registry = register_capability(registry, std::move(cap));
  return registry;
}

const Vulnerability* best_vulnerability(const NetworkTopology& topology, const Node& node,
                                        AccessRequirement access,
                                        const SimulationState* state) {
  const bool patched = state && state->has_defense(node.id, DefenseKind::patch);
  const Vulnerability* best = nullptr;
  for (std::size_t i = 0; i < node.vulnerability_ids.size(); ++i) {
    if (patched && i == 0) continue;
    const Vulnerability* v = find_vulnerability(topology, node.vulnerability_ids[i]);
    if (!v || v->access > access) continue;
    if (!best || v->success_prob > best->success_prob) best = v;
  }
  return best;
}

EffectiveOdds effective_odds(const AtomicCapability& cap, const NetworkTopology& topology,
                             const Binding& binding, const SimulationState* state) {
  for (const auto& p : cap.preconditions) {
    const auto* need = std::get_if<pred::NodeHasVulnWithAccess>(&p);
    if (!need) continue;
    const Node* node = find_node(topology, bound(binding, need->node));
    const Vulnerability* v =
        node ? best_vulnerability(topology, *node, need->access, state) : nullptr;
    if (v) return {v->success_prob, v->detection_prob, v};
    return {0.0, cap.detection_prob, nullptr};
  }
  return {cap.base_success_prob, cap.detection_prob, nullptr};
}

PreconditionResult evaluate_preconditions(const AtomicCapability& cap,
                                          const SimulationState& state,
                                          const NetworkTopology& topology,
                                          const Binding& binding) {
  for (const auto& p : cap.preconditions) {
    for (const auto& slot : predicate_slots(p)) bound(binding, slot);
  }
  for (const auto& p : cap.preconditions) {
    if (!holds(p, state, topology, binding)) return {false, p};
  }
  return {true, std::nullopt};
}

Application apply_capability(const SimulationState& state, const AtomicCapability& cap,
                             const Binding& binding, const NetworkTopology& topology,
                             Rng& rng) {
  require_slots_bound(cap, binding);
  if (auto check = evaluate_preconditions(cap, state, topology, binding); !check.holds) {
    throw Error(Errc::PreconditionViolated,
                "capability '" + cap.id + "' precondition " +
                    std::string(predicate_name(*check.first_failed)) + " does not hold");
  }

  const EffectiveOdds odds = effective_odds(cap, topology, binding, &state);
  const std::string target = optional_slot(binding, kTargetSlot);

  Application result{state, {}};
  SimulationState& next = result.state;
  CapabilityOutcome& outcome = result.outcome;

  const bool rolled_success = rng.bernoulli(odds.success);
  bool detected = rng.bernoulli(odds.detection);

  bool deceived = false;
  bool blocked = false;
  bool override_alarm = false;
  if (cap.kind == CapabilityKind::attack && !target.empty()) {
    if (state.has_defense(target, DefenseKind::honeypot)) {
      deceived = true;
      override_alarm = rng.bernoulli(kHoneypotAlarmProb) || override_alarm;
    }
    if (state.has_defense(target, DefenseKind::shocktrap)) {
      blocked = true;
      override_alarm = rng.bernoulli(kShocktrapAlarmProb) || override_alarm;
    }
  }
  detected = detected || override_alarm;

  auto trap = [&](std::uint32_t rounds) {
    next.trapped_until = std::max(next.trapped_until, next.round + rounds + 1);
    outcome.trapped_for = std::max(outcome.trapped_for, rounds);
    outcome.applied_effects.push_back(effect::TrapActor{rounds});
  };

  if (blocked) {
    outcome.success = false;
    trap(kShocktrapTrapRounds);
  } else if (deceived) {
    outcome.success = true;
  } else if (rolled_success) {
    outcome.success = true;
    for (const auto& eff : cap.effects) {
      std::visit(
          overloaded{
              [&](const effect::Compromise& e) {
                const auto& node = bound(binding, e.node);
                CompromiseLevel level = CompromiseLevel::user;
                if (e.privilege == GrantedPrivilege::admin) level = CompromiseLevel::admin;
                if (e.privilege == GrantedPrivilege::from_vulnerability && odds.vulnerability) {
                  level = level_of(odds.vulnerability->gained_privilege);
                }
                auto& current = next.compromise[node];
                if (current == CompromiseLevel::none) next.compromised_at.emplace(node, next.round);
                current = std::max(current, level);
                next.footholds.insert(node);
                outcome.applied_effects.push_back(eff);
              },
              [&](const effect::GainCredentials& e) {
                const auto& node_id = bound(binding, e.node);
                if (next.has_defense(node_id, DefenseKind::encryption)) return;
                const Node* node = find_node(topology, node_id);
                if (!node) return;
                for (const auto& cid : node->credential_ids) {
                  if (find_credential(topology, cid)) next.credentials_held.insert(cid);
                }
                outcome.applied_effects.push_back(eff);
              },
              [&](const effect::Deploy& e) {
                next.deployed[bound(binding, e.node)].insert(e.defense);
                outcome.applied_effects.push_back(eff);
              },
              [&](const effect::RaiseAlarm&) { detected = true; },
              [&](const effect::TrapActor& e) { trap(e.duration_rounds); },
              [&](const effect::NullifyCredentialTheft& e) {
                next.deployed[bound(binding, e.node)].insert(DefenseKind::encryption);
                outcome.applied_effects.push_back(eff);
              },
              [&](const effect::RevealVulnerabilities& e) {
                next.deployed[bound(binding, e.node)].insert(DefenseKind::scanner);
                outcome.applied_effects.push_back(eff);
              },
          },
          eff);
    }
  }

  outcome.detected = detected;
  if (detected) {
    next.alarms.push_back({next.round, target});
    outcome.applied_effects.push_back(effect::RaiseAlarm{});
  }
  return result;
}

const NodeId& Candidate::target() const {
  static const NodeId empty;
  auto it = binding.find(kTargetSlot);
  return it == binding.end() ? empty : it->second;
}

std::string Candidate::key() const {
  return capability->id + "|" + target() + "|" + optional_slot(binding, kSourceSlot);
}

std::vector<Candidate> applicable_capabilities(const CapabilityRegistry& registry,
                                               const SimulationState& state,
                                               const NetworkTopology& topology, Actor actor,
                                               const std::vector<NodeId>& domain) {
  const CapabilityKind wanted =
      actor == Actor::attacker ? CapabilityKind::attack : CapabilityKind::defense;
  std::vector<NodeId> nodes = domain;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<Candidate> out;
  for (const auto& [id, cap] : registry) {
    if (cap.kind != wanted) continue;
    const bool needs_source = cap.references_slot(kSourceSlot);
    for (const auto& target : nodes) {
      if (!needs_source) {
        Binding b{{std::string(kTargetSlot), target}};
        if (evaluate_preconditions(cap, state, topology, b).holds) out.push_back({&cap, b});
        continue;
      }
      for (const auto& source : nodes) {
        if (source == target) continue;
        Binding b{{std::string(kTargetSlot), target}, {std::string(kSourceSlot), source}};
        if (evaluate_preconditions(cap, state, topology, b).holds) out.push_back({&cap, b});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::forward_as_tuple(a.capability->cost_units, a.capability->id, a.target(),
                                 optional_slot(a.binding, kSourceSlot)) <
           std::forward_as_tuple(b.capability->cost_units, b.capability->id, b.target(),
                                 optional_slot(b.binding, kSourceSlot));
  });
  return out;
}

DefenseStrategy compose_strategy(const CapabilityRegistry& registry,
                                 const std::vector<Placement>& placements,
                                 const NetworkTopology* topology) {
  std::set<std::pair<std::string, NodeId>> seen;
  for (const auto& p : placements) {
    const AtomicCapability* cap = registry.find(p.capability_id);
    if (!cap) throw Error(Errc::UnknownCapability, "capability '" + p.capability_id + "'");
    if (cap->kind != CapabilityKind::defense) {
      throw Error(Errc::KindMismatch,
                  "'" + p.capability_id + "' is an attack capability, not a defense");
    }
    if (!seen.emplace(p.capability_id, p.target_node).second) {
      throw Error(Errc::DuplicatePlacement,
                  "'" + p.capability_id + "' placed twice on '" + p.target_node + "'");
    }
    if (topology && !find_node(*topology, p.target_node)) {
      throw Error(Errc::UnknownNode, "node '" + p.target_node + "' is not in the topology");
    }
  }
  return DefenseStrategy{placements};
}

}  // namespace rangesim
