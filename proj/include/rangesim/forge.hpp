#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rangesim/error.hpp"
#include "rangesim/registry.hpp"
#include "rangesim/scenario.hpp"

namespace rangesim {

enum class AttackerProfile : std::uint8_t { opportunistic, targeted };

struct RequirementConstraints {
  std::uint32_t max_nodes = 1;
  std::vector<NodeClass> required_classes;
  AttackerProfile attacker_profile = AttackerProfile::opportunistic;
  NodeClass target_class = NodeClass::controller;
  friend bool operator==(const RequirementConstraints&, const RequirementConstraints&) = default;
};

struct Requirement {
  std::string domain_tag;
  std::string narrative;
  RequirementConstraints constraints;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

Requirement parse_requirement(std::string_view document);
std::string serialize_requirement(const Requirement& requirement);

// --- Blackboard -------------------------------------------------------------

struct ContextProfile {
  std::string domain_tag;
  std::string narrative;
  std::vector<NodeClass> asset_classes;
  std::vector<SubProblem> problem_decomposition;
  std::string threat_actor;
  double vuln_rate = 0.0;
  double credential_rate = 0.0;
  double intra_zone_density = 0.0;
  friend bool operator==(const ContextProfile&, const ContextProfile&) = default;
};

struct ThreatPlan {
  std::vector<Objective> objectives;
  std::vector<std::string> capability_refs;
  friend bool operator==(const ThreatPlan&, const ThreatPlan&) = default;
};

namespace hint {
struct AddEntrySurface {
  NodeClass cls = NodeClass::maintenance_endpoint;
  friend bool operator==(const AddEntrySurface&, const AddEntrySurface&) = default;
};
struct AddVulnerability {
  NodeId node;
  AccessRequirement access = AccessRequirement::network;
  friend bool operator==(const AddVulnerability&, const AddVulnerability&) = default;
};
struct AddEdge {
  NodeId src;
  NodeId dst;
  friend bool operator==(const AddEdge&, const AddEdge&) = default;
};
// Adds one node of the requirement's target class, within max_nodes.
struct RaiseNodeBudget {
  friend bool operator==(const RaiseNodeBudget&, const RaiseNodeBudget&) = default;
};
}  // namespace hint

// Alternative order is the application priority used by refine().
using RefinementHint = std::variant<hint::AddEntrySurface, hint::AddVulnerability,
                                    hint::AddEdge, hint::RaiseNodeBudget>;

std::string describe(const RefinementHint& h);

// What the validator agent writes: the report (including NoAttackPath and
// InvalidDefensePlan findings) plus refinement hints in priority order.
struct ValidatorVerdict {
  ValidationReport report;
  std::vector<RefinementHint> hints;
  friend bool operator==(const ValidatorVerdict&, const ValidatorVerdict&) = default;
};

enum class Slot : std::uint8_t {
  context_profile,
  topology_draft,
  threat_plan,
  defense_plan,
  validation_report,
};
std::string_view to_string(Slot slot) noexcept;

struct BlackboardSlots {
  std::optional<ContextProfile> context_profile;
  std::optional<NetworkTopology> topology_draft;
  std::optional<ThreatPlan> threat_plan;
  std::optional<DefenseStrategy> defense_plan;
  std::optional<ValidatorVerdict> validation_report;

  bool populated(Slot slot) const;
  void clear(Slot slot);
  bool same(Slot slot, const BlackboardSlots& other) const;

  friend bool operator==(const BlackboardSlots&, const BlackboardSlots&) = default;
};

enum class AgentRoleId : std::uint8_t {
  context_analyst,
  topology_synthesizer,
  threat_planner,
  defense_planner,
  validator,
};
std::string_view to_string(AgentRoleId role) noexcept;

struct AgentRole {
  AgentRoleId id;
  std::vector<Slot> consumes;
  std::vector<Slot> produces;
};

// The five roles in pipeline order.
const std::array<AgentRole, 5>& pipeline_roles();
const AgentRole& role_of(AgentRoleId id);

struct LogEntry {
  AgentRoleId agent;
  std::uint64_t revision = 0;
  std::string summary;
  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct Blackboard {
  Requirement requirement;
  BlackboardSlots slots;
  std::uint64_t revision = 0;
  std::vector<LogEntry> agent_log;
  friend bool operator==(const Blackboard&, const Blackboard&) = default;
};

// Seam for alternative agent implementations. An agent reads the board and
// writes its role's slots into `out`; agent_step enforces ownership.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentRoleId role() const = 0;
  // Returns a one-line summary for the agent log.
  virtual std::string run(const Blackboard& board, BlackboardSlots& out,
                          const CapabilityRegistry& registry, std::uint64_t seed) const = 0;
};

using AgentSet = std::map<AgentRoleId, std::shared_ptr<const Agent>>;

// Deterministic rule-based agents for all five roles.
const AgentSet& default_agents();

// Runs one agent. Throws MissingConsumedSlot if an input slot is empty and
// SlotOwnershipViolation if the agent touched a slot it does not own or left
// one of its own empty.
Blackboard agent_step(AgentRoleId role, const Blackboard& board,
                      const CapabilityRegistry& registry, std::uint64_t seed,
                      const AgentSet& agents = default_agents());

// Applies the highest-priority hint to topology_draft (on behalf of the
// topology synthesizer) and clears threat_plan, defense_plan and
// validation_report. Throws NoHintsAvailable.
Blackboard refine(const Blackboard& board, const ValidatorVerdict& verdict);

// Scenario assembled from the populated slots, with the draft as an
// explicit topology.
ScenarioSpec assemble_spec(const Blackboard& board);

struct GenerationReport {
  std::uint32_t iterations_used = 0;
  std::vector<ValidationReport> per_iteration_reports;
  std::vector<RefinementHint> refinements_applied;
  bool final_valid = false;
  friend bool operator==(const GenerationReport&, const GenerationReport&) = default;
};

class GenerationFailed : public Error {
 public:
  explicit GenerationFailed(GenerationReport report);
  const GenerationReport& report() const noexcept { return report_; }

 private:
  GenerationReport report_;
};

struct GenerationResult {
  ScenarioSpec spec;
  GenerationReport report;
  DefenseStrategy strategy;
  Blackboard board;
};

// Context analyst, synthesizer, threat planner, defense planner, validator;
// then up to max_iterations - 1 rounds of refine + downstream re-runs. An
// iteration without hints re-validates the unchanged board. Throws
// EmptyRequirement, InvariantViolation, GenerationFailed.
GenerationResult run_pipeline(const Requirement& requirement, const CapabilityRegistry& registry,
                              std::uint64_t seed, std::uint32_t max_iterations,
                              const AgentSet& agents = default_agents());

std::string serialize_generation_report(const GenerationReport& report);

}  // namespace rangesim
