#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rangesim/vocabulary.hpp"

namespace rangesim {

// Parameter slots a capability may reference. Bindings map slot names to
// node ids.
inline constexpr std::string_view kTargetSlot = "target";
inline constexpr std::string_view kSourceSlot = "source";

using Binding = std::map<std::string, NodeId, std::less<>>;

inline constexpr std::string_view kInterfaceVersion = "cap-1";

// --- Predicates (closed vocabulary) -----------------------------------------

namespace pred {

struct ActorHasFoothold {
  std::string node;
  Privilege min_privilege = Privilege::user;
  friend bool operator==(const ActorHasFoothold&, const ActorHasFoothold&) = default;
};
struct EdgeExists {
  std::string src;
  std::string dst;
  friend bool operator==(const EdgeExists&, const EdgeExists&) = default;
};
// Satisfied by an unpatched vulnerability whose access requirement is at or
// below `access` (network < adjacent < local).
struct NodeHasVulnWithAccess {
  std::string node;
  AccessRequirement access = AccessRequirement::network;
  friend bool operator==(const NodeHasVulnWithAccess&, const NodeHasVulnWithAccess&) = default;
};
struct CredentialHeld {
  std::string granting_access_to;
  friend bool operator==(const CredentialHeld&, const CredentialHeld&) = default;
};
struct DefenseAbsent {
  std::string node;
  DefenseKind defense = DefenseKind::honeypot;
  friend bool operator==(const DefenseAbsent&, const DefenseAbsent&) = default;
};
struct DefensePresent {
  std::string node;
  DefenseKind defense = DefenseKind::honeypot;
  friend bool operator==(const DefensePresent&, const DefensePresent&) = default;
};
// Holds when the node's class is any of `classes`.
struct NodeClassIs {
  std::string node;
  std::vector<NodeClass> classes;
  friend bool operator==(const NodeClassIs&, const NodeClassIs&) = default;
};
struct NodeNotCompromised {
  std::string node;
  friend bool operator==(const NodeNotCompromised&, const NodeNotCompromised&) = default;
};
struct AssetValueAbove {
  std::string node;
  int threshold = 0;
  friend bool operator==(const AssetValueAbove&, const AssetValueAbove&) = default;
};

}  // namespace pred

using Predicate =
    std::variant<pred::ActorHasFoothold, pred::EdgeExists, pred::NodeHasVulnWithAccess,
                 pred::CredentialHeld, pred::DefenseAbsent, pred::DefensePresent,
                 pred::NodeClassIs, pred::NodeNotCompromised, pred::AssetValueAbove>;

std::string_view predicate_name(const Predicate& p) noexcept;
std::vector<std::string> predicate_slots(const Predicate& p);

// --- Effects (closed vocabulary) --------------------------------------------

// Privilege granted by a compromise effect; `from_vulnerability` takes the
// gained_privilege of the vulnerability matched by the capability.
enum class GrantedPrivilege : std::uint8_t { user, admin, from_vulnerability };

namespace effect {

struct Compromise {
  std::string node;
  GrantedPrivilege privilege = GrantedPrivilege::user;
  friend bool operator==(const Compromise&, const Compromise&) = default;
};
struct GainCredentials {
  std::string node;
  friend bool operator==(const GainCredentials&, const GainCredentials&) = default;
};
struct Deploy {
  std::string node;
  DefenseKind defense = DefenseKind::honeypot;
  friend bool operator==(const Deploy&, const Deploy&) = default;
};
struct RaiseAlarm {
  friend bool operator==(const RaiseAlarm&, const RaiseAlarm&) = default;
};
struct TrapActor {
  std::uint32_t duration_rounds = 1;
  friend bool operator==(const TrapActor&, const TrapActor&) = default;
};
struct NullifyCredentialTheft {
  std::string node;
  friend bool operator==(const NullifyCredentialTheft&, const NullifyCredentialTheft&) = default;
};
struct RevealVulnerabilities {
  std::string node;
  friend bool operator==(const RevealVulnerabilities&, const RevealVulnerabilities&) = default;
};

}  // namespace effect

using Effect = std::variant<effect::Compromise, effect::GainCredentials, effect::Deploy,
                            effect::RaiseAlarm, effect::TrapActor,
                            effect::NullifyCredentialTheft, effect::RevealVulnerabilities>;

std::string_view effect_name(const Effect& e) noexcept;
std::vector<std::string> effect_slots(const Effect& e);

// --- The standardized capability interface ----------------------------------

struct AtomicCapability {
  std::string id;
  CapabilityKind kind = CapabilityKind::attack;
  std::string name;
  std::string technique_tag;
  std::vector<Predicate> preconditions;
  std::vector<Effect> effects;
  double base_success_prob = 0.0;
  double detection_prob = 0.0;
  std::uint32_t cost_units = 0;
  std::string interface_version{kInterfaceVersion};

  // Every slot named by a precondition or effect, sorted and unique.
  std::vector<std::string> slots() const;
  bool references_slot(std::string_view slot) const;

  friend bool operator==(const AtomicCapability&, const AtomicCapability&) = default;
};

struct CapabilityOutcome {
  bool success = false;
  bool detected = false;
  std::uint32_t trapped_for = 0;
  std::vector<Effect> applied_effects;

  friend bool operator==(const CapabilityOutcome&, const CapabilityOutcome&) = default;
};

}  // namespace rangesim
