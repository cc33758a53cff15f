#include "rangesim/vocabulary.hpp"

#include <algorithm>

namespace rangesim {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text,
                           const std::array<Enum, N>& values) noexcept {
  for (Enum v : values) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

}  // namespace

bool is_identifier(std::string_view text) noexcept {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '.' || c == ':' ||
           c == '-';
  });
}

std::string_view to_string(NodeClass value) noexcept {
  switch (value) {
    case NodeClass::sensor: return "sensor";
    case NodeClass::controller: return "controller";
    case NodeClass::gateway: return "gateway";
    case NodeClass::camera_server: return "camera_server";
    case NodeClass::maintenance_endpoint: return "maintenance_endpoint";
    case NodeClass::workstation: return "workstation";
    case NodeClass::data_server: return "data_server";
  }
  return "?";
}

std::string_view to_string(AccessRequirement value) noexcept {
  switch (value) {
    case AccessRequirement::network: return "network";
    case AccessRequirement::adjacent: return "adjacent";
    case AccessRequirement::local: return "local";
  }
  return "?";
}

std::string_view to_string(Privilege value) noexcept {
  return value == Privilege::admin ? "admin" : "user";
}

std::string_view to_string(CompromiseLevel value) noexcept {
  switch (value) {
    case CompromiseLevel::none: return "none";
    case CompromiseLevel::user: return "user";
    case CompromiseLevel::admin: return "admin";
  }
  return "?";
}

std::string_view to_string(DefenseKind value) noexcept {
  switch (value) {
    case DefenseKind::honeypot: return "honeypot";
    case DefenseKind::shocktrap: return "shocktrap";
    case DefenseKind::encryption: return "encryption";
    case DefenseKind::scanner: return "scanner";
    case DefenseKind::patch: return "patch";
  }
  return "?";
}

std::string_view to_string(Actor value) noexcept {
  return value == Actor::attacker ? "attacker" : "defender";
}

std::string_view to_string(CapabilityKind value) noexcept {
  return value == CapabilityKind::attack ? "attack" : "defense";
}

std::optional<NodeClass> parse_node_class(std::string_view text) noexcept {
  return lookup(text, kAllNodeClasses);
}

std::optional<AccessRequirement> parse_access(std::string_view text) noexcept {
  return lookup(text, std::array{AccessRequirement::network,
                                 AccessRequirement::adjacent,
                                 AccessRequirement::local});
}

std::optional<Privilege> parse_privilege(std::string_view text) noexcept {
  return lookup(text, std::array{Privilege::user, Privilege::admin});
}

std::optional<CompromiseLevel> parse_compromise_level(
    std::string_view text) noexcept {
  return lookup(text, std::array{CompromiseLevel::none, CompromiseLevel::user,
                                 CompromiseLevel::admin});
}

std::optional<DefenseKind> parse_defense_kind(std::string_view text) noexcept {
  return lookup(text, std::array{DefenseKind::honeypot, DefenseKind::shocktrap,
                                 DefenseKind::encryption, DefenseKind::scanner,
                                 DefenseKind::patch});
}

std::optional<Actor> parse_actor(std::string_view text) noexcept {
  return lookup(text, std::array{Actor::attacker, Actor::defender});
}

std::optional<CapabilityKind> parse_capability_kind(
    std::string_view text) noexcept {
  return lookup(text, std::array{CapabilityKind::attack, CapabilityKind::defense});
}

}  // namespace rangesim
