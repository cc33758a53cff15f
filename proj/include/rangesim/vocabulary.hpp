#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rangesim {

using NodeId = std::string;

// Identifiers: non-empty, [A-Za-z0-9_.:-] only.
bool is_identifier(std::string_view text) noexcept;

enum class NodeClass : std::uint8_t {
  sensor,
  controller,
  gateway,
  camera_server,
  maintenance_endpoint,
  workstation,
  data_server,
};
inline constexpr std::size_t kNodeClassCount = 7;
inline constexpr std::array<NodeClass, kNodeClassCount> kAllNodeClasses = {
    NodeClass::sensor,        NodeClass::controller,
    NodeClass::gateway,       NodeClass::camera_server,
    NodeClass::maintenance_endpoint, NodeClass::workstation,
    NodeClass::data_server,
};

// Ordered: network < adjacent < local. A vulnerability requiring `network`
// is reachable by anyone who can reach `adjacent` or `local`.
enum class AccessRequirement : std::uint8_t { network, adjacent, local };

enum class Privilege : std::uint8_t { user, admin };

// Per-node compromise level; ordered none < user < admin.
enum class CompromiseLevel : std::uint8_t { none, user, admin };

enum class DefenseKind : std::uint8_t { honeypot, shocktrap, encryption, scanner, patch };

enum class Actor : std::uint8_t { attacker, defender };

enum class CapabilityKind : std::uint8_t { attack, defense };

std::string_view to_string(NodeClass value) noexcept;
std::string_view to_string(AccessRequirement value) noexcept;
std::string_view to_string(Privilege value) noexcept;
std::string_view to_string(CompromiseLevel value) noexcept;
std::string_view to_string(DefenseKind value) noexcept;
std::string_view to_string(Actor value) noexcept;
std::string_view to_string(CapabilityKind value) noexcept;

std::optional<NodeClass> parse_node_class(std::string_view text) noexcept;
std::optional<AccessRequirement> parse_access(std::string_view text) noexcept;
std::optional<Privilege> parse_privilege(std::string_view text) noexcept;
std::optional<CompromiseLevel> parse_compromise_level(std::string_view text) noexcept;
std::optional<DefenseKind> parse_defense_kind(std::string_view text) noexcept;
std::optional<Actor> parse_actor(std::string_view text) noexcept;
std::optional<CapabilityKind> parse_capability_kind(std::string_view text) noexcept;

inline CompromiseLevel level_of(Privilege p) noexcept {
  return p == Privilege::admin ? CompromiseLevel::admin : CompromiseLevel::user;
}

}  // namespace rangesim
