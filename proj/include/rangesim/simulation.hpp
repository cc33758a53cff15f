#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rangesim/registry.hpp"
#include "rangesim/rng.hpp"
#include "rangesim/scenario.hpp"
#include "rangesim/state.hpp"

namespace rangesim {

enum class AttackerPolicy : std::uint8_t { greedy_value, cheapest_step, uniform_random };
enum class DefenderPolicy : std::uint8_t { static_deployment, reactive };

std::string_view to_string(AttackerPolicy policy) noexcept;
std::string_view to_string(DefenderPolicy policy) noexcept;  // "static" / "reactive"
std::optional<AttackerPolicy> parse_attacker_policy(std::string_view text) noexcept;
std::optional<DefenderPolicy> parse_defender_policy(std::string_view text) noexcept;

// Idle rounds (nothing left for the attacker to try) that end a run.
inline constexpr std::uint32_t kStallRounds = 3;

struct SimulationConfig {
  std::uint32_t max_rounds = 20;
  std::uint64_t seed = 0;
  AttackerPolicy attacker_policy = AttackerPolicy::greedy_value;
  DefenderPolicy defender_policy = DefenderPolicy::static_deployment;
  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct EventOutcome {
  bool success = false;
  bool detected = false;
  std::uint32_t trapped_for = 0;
  friend bool operator==(const EventOutcome&, const EventOutcome&) = default;
};

struct SimEvent {
  std::uint32_t round = 0;
  Actor actor = Actor::attacker;
  std::string capability_id;
  NodeId target;
  EventOutcome outcome;
  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct SimulationTrace {
  SimulationConfig config;
  std::string scenario_digest;
  std::vector<SimEvent> events;
  SimulationState final_state;
  friend bool operator==(const SimulationTrace&, const SimulationTrace&) = default;
};

struct Metrics {
  std::map<std::size_t, bool> objectives_met;
  std::optional<std::uint32_t> time_to_first_objective;
  double compromised_fraction = 0.0;
  std::uint64_t detection_count = 0;
  std::uint64_t attacker_cost_spent = 0;
  // Numerator and denominator of compromised_fraction.
  std::size_t compromised_nodes = 0;
  std::size_t total_nodes = 0;
  // Whether any attacker objective was met.
  bool attacker_succeeded = false;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct Policies {
  AttackerPolicy attacker = AttackerPolicy::greedy_value;
  DefenderPolicy defender = DefenderPolicy::static_deployment;
};

struct RoundResult {
  SimulationState state;
  std::vector<SimEvent> events;
  // True when the attacker was free to act but had nothing left to try.
  bool attacker_idle = false;
};

// Executes round state.round + 1:
//   1. reactive defender: after an alarm in the previous round, patch the
//      highest-asset uncompromised node without a patch (ties to smaller id);
//   2. attacker, unless trapped: picks one applicable, not yet settled
//      (capability, binding) per policy, ties by the registry order;
//      uniform_random spends one selection draw first;
//   3. the pick is applied.
// Throws RoundLimitExceeded when state.round >= max_rounds.
RoundResult step_round(const SimulationState& state, const NetworkTopology& topology,
                       const CapabilityRegistry& registry, const Policies& policies,
                       std::uint32_t max_rounds, Rng& rng);

// Deploys the strategy at round 0 (through apply_capability) and plays rounds
// until max_rounds, until every attacker objective holds, or until
// kStallRounds consecutive idle rounds. Throws InvalidScenario,
// InvalidStrategy.
struct SimulationResult {
  SimulationTrace trace;
  Metrics metrics;
};
SimulationResult run_simulation(const ScenarioSpec& spec, const DefenseStrategy& strategy,
                                const CapabilityRegistry& registry,
                                const SimulationConfig& config);

// compromise: matching nodes compromised / matching >= threshold.
// protect:    matching nodes uncompromised / matching >= threshold at the end.
// detect:     some successful attacker event was detected.
Metrics compute_metrics(const SimulationTrace& trace, const std::vector<Objective>& objectives,
                        const NetworkTopology& topology, const CapabilityRegistry& registry);

struct BatchResult {
  std::vector<Metrics> per_seed;
  double mean_compromised_fraction = 0.0;
  double attacker_success_rate = 0.0;
  double mean_detection_count = 0.0;
};

// Run i uses seed config.seed + i (mod 2^64). Runs are spread over `threads`
// workers (0 = hardware concurrency); aggregation happens afterwards.
BatchResult batch_run(const ScenarioSpec& spec, const DefenseStrategy& strategy,
                      const CapabilityRegistry& registry, const SimulationConfig& config,
                      std::size_t n, unsigned threads = 0);

BatchResult aggregate(std::vector<Metrics> per_seed);

// Hex SHA-256 of serialize_scenario(spec).
std::string scenario_digest(const ScenarioSpec& spec);

}  // namespace rangesim
