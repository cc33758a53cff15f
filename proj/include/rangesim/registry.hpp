#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rangesim/capability.hpp"
#include "rangesim/rng.hpp"
#include "rangesim/state.hpp"
#include "rangesim/topology.hpp"

namespace rangesim {

// Honeypot and shocktrap react when an attack capability touches a node they
// are deployed on. Each reaction costs one extra draw.
inline constexpr double kHoneypotAlarmProb = 0.9;
inline constexpr double kShocktrapAlarmProb = 1.0;
inline constexpr std::uint32_t kShocktrapTrapRounds = 2;

// Immutable-by-value collection of capabilities keyed (and iterated) by id.
class CapabilityRegistry {
 public:
  using Map = std::map<std::string, AtomicCapability, std::less<>>;

  const AtomicCapability* find(std::string_view id) const;
  std::size_t size() const noexcept { return caps_.size(); }
  Map::const_iterator begin() const noexcept { return caps_.begin(); }
  Map::const_iterator end() const noexcept { return caps_.end(); }

  friend bool operator==(const CapabilityRegistry&, const CapabilityRegistry&) = default;

 private:
  Map caps_;
  friend CapabilityRegistry register_capability(const CapabilityRegistry&, AtomicCapability);
};

// Throws Error(UnsupportedInterfaceVersion | KindEffectMismatch |
// InvariantViolation) if `cap` breaks a capability invariant.
void check_capability(const AtomicCapability& cap);

// Returns a copy of `registry` with `cap` added; the input is untouched.
CapabilityRegistry register_capability(const CapabilityRegistry& registry,
                                       AtomicCapability cap);

// phishing, exploit_vuln, lateral_move_with_cred, credential_theft,
// exfiltrate, honeypot, shocktrap, vuln_scan, data_encryption, patch.
CapabilityRegistry builtin_registry();

struct PreconditionResult {
  bool holds = false;
  std::optional<Predicate> first_failed;
};

// Evaluates preconditions in declaration order; stops at the first false one.
PreconditionResult evaluate_preconditions(const AtomicCapability& cap,
                                          const SimulationState& state,
                                          const NetworkTopology& topology,
                                          const Binding& binding);

// Best exploitable vulnerability on `node` for the access level: highest
// success_prob, first listed on ties. Vulnerabilities neutralised by a patch
// in `state` are skipped (a patch covers the node's first listed one).
const Vulnerability* best_vulnerability(const NetworkTopology& topology,
                                        const Node& node, AccessRequirement access,
                                        const SimulationState* state);

struct EffectiveOdds {
  double success = 0.0;
  double detection = 0.0;
  const Vulnerability* vulnerability = nullptr;
};

// Success and detection odds for a binding. A capability with a
// node_has_vuln_with_access precondition takes both from the matched
// vulnerability; otherwise from its own base_success_prob/detection_prob.
EffectiveOdds effective_odds(const AtomicCapability& cap, const NetworkTopology& topology,
                             const Binding& binding, const SimulationState* state);

struct Application {
  SimulationState state;
  CapabilityOutcome outcome;
};

// Applies `cap` under `binding`.
//
// Draw budget: one draw for success, one for detection, then for an attack
// capability one more per reacting defense on the target (honeypot first,
// then shocktrap). Nothing else touches `rng`.
//
// Shocktrap blocks the step (no effects, detected, attacker trapped for
// kShocktrapTrapRounds). Honeypot reports success but applies no effect.
// Any detection appends an alarm for the current round on the target.
Application apply_capability(const SimulationState& state, const AtomicCapability& cap,
                             const Binding& binding, const NetworkTopology& topology,
                             Rng& rng);

struct Candidate {
  const AtomicCapability* capability = nullptr;
  Binding binding;

  const NodeId& target() const;
  // "capability|target|source" (source empty when unbound).
  std::string key() const;
};

// Every (capability, binding) of the actor's kind whose preconditions hold,
// bindings drawn from `domain`. Ordered by cost_units, capability id, target
// id, then source id; this order is the engine-wide tie-break.
std::vector<Candidate> applicable_capabilities(const CapabilityRegistry& registry,
                                               const SimulationState& state,
                                               const NetworkTopology& topology, Actor actor,
                                               const std::vector<NodeId>& domain);

struct Placement {
  std::string capability_id;
  NodeId target_node;
  friend bool operator==(const Placement&, const Placement&) = default;
};

struct DefenseStrategy {
  std::vector<Placement> capability_placements;
  friend bool operator==(const DefenseStrategy&, const DefenseStrategy&) = default;
};

// Throws UnknownCapability, KindMismatch, DuplicatePlacement, or UnknownNode
// (only when `topology` is supplied).
DefenseStrategy compose_strategy(const CapabilityRegistry& registry,
                                 const std::vector<Placement>& placements,
                                 const NetworkTopology* topology = nullptr);

// Capability definition files: one capability object or an array of them.
std::vector<AtomicCapability> parse_capability_document(std::string_view text);
std::string serialize_capability(const AtomicCapability& cap);

std::string serialize_strategy(const DefenseStrategy& strategy);
DefenseStrategy parse_strategy_document(std::string_view text);

}  // namespace rangesim
