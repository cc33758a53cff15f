#include "rangesim/simulation.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "rangesim/error.hpp"

namespace rangesim {

std::string_view to_string(AttackerPolicy policy) noexcept {
  switch (policy) {
    case AttackerPolicy::greedy_value: return "greedy_value";
    case AttackerPolicy::cheapest_step: return "cheapest_step";
    case AttackerPolicy::uniform_random: return "uniform_random";
  }
  return "?";
}

std::string_view to_string(DefenderPolicy policy) noexcept {
  return policy == DefenderPolicy::reactive ? "reactive" : "static";
}

std::optional<AttackerPolicy> parse_attacker_policy(std::string_view text) noexcept {
  for (auto p : {AttackerPolicy::greedy_value, AttackerPolicy::cheapest_step,
                 AttackerPolicy::uniform_random}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<DefenderPolicy> parse_defender_policy(std::string_view text) noexcept {
  for (auto p : {DefenderPolicy::static_deployment, DefenderPolicy::reactive}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::string scenario_digest(const ScenarioSpec& spec) {
  const std::string text = serialize_scenario(spec);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0x0F]);
  }
  return hex;
}

namespace {

std::vector<NodeId> node_ids(const NetworkTopology& topology) {
  std::vector<NodeId> ids;
  for (const auto& n : topology.nodes) ids.push_back(n.id);
  return ids;
}

int asset_value(const NetworkTopology& topology, const NodeId& id) {
  const Node* n = find_node(topology, id);
  return n ? n->asset_value : 0;
}

SimEvent make_event(std::uint32_t round, Actor actor, const std::string& cap,
                    const NodeId& target, const CapabilityOutcome& outcome) {
  return {round, actor, cap, target, {outcome.success, outcome.detected, outcome.trapped_for}};
}

// Smallest count c of matching compromised nodes with c / matching >= threshold.
std::size_t required_count(double threshold, std::size_t matching) {
  for (std::size_t c = 0; c <= matching; ++c) {
    if (static_cast<double>(c) / static_cast<double>(matching) >= threshold) return c;
  }
  return matching + 1;
}

// Round at which the objective first held, if it did.
std::optional<std::uint32_t> objective_round(const Objective& objective,
                                             const SimulationState& state,
                                             const std::vector<SimEvent>& events,
                                             const NetworkTopology& topology) {
  const auto matching = select_nodes(topology, objective.target);
  switch (objective.kind) {
    case ObjectiveKind::compromise: {
      if (matching.empty()) return std::nullopt;
      std::vector<std::uint32_t> rounds;
      for (const auto& id : matching) {
        auto it = state.compromised_at.find(id);
        if (it != state.compromised_at.end()) rounds.push_back(it->second);
      }
      const std::size_t need = required_count(objective.threshold, matching.size());
      if (need > rounds.size()) return std::nullopt;
      if (need == 0) return 0u;
      std::sort(rounds.begin(), rounds.end());
      return rounds[need - 1];
    }
    case ObjectiveKind::protect: {
      if (matching.empty()) return std::nullopt;
      std::size_t intact = 0;
      for (const auto& id : matching) intact += state.level(id) == CompromiseLevel::none;
      const double fraction = static_cast<double>(intact) / static_cast<double>(matching.size());
      if (fraction >= objective.threshold) return state.round;
      return std::nullopt;
    }
    case ObjectiveKind::detect: {
      for (const auto& e : events) {
        if (e.actor == Actor::attacker && e.outcome.success && e.outcome.detected) return e.round;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool attacker_objectives_met(const std::vector<Objective>& objectives,
                             const SimulationState& state, const std::vector<SimEvent>& events,
                             const NetworkTopology& topology) {
  bool any = false;
  for (const auto& o : objectives) {
    if (o.actor != Actor::attacker) continue;
    any = true;
    if (!objective_round(o, state, events, topology)) return false;
  }
  return any;
}

}  // namespace

RoundResult step_round(const SimulationState& state, const NetworkTopology& topology,
                       const CapabilityRegistry& registry, const Policies& policies,
                       std::uint32_t max_rounds, Rng& rng) {
  if (state.round >= max_rounds) {
    throw Error(Errc::RoundLimitExceeded, "round " + std::to_string(state.round) +
                                              " already reached the limit of " +
                                              std::to_string(max_rounds));
  }
  RoundResult result{state, {}, false};
  SimulationState& next = result.state;
  next.round = state.round + 1;
  const std::uint32_t current = next.round;

  if (policies.defender == DefenderPolicy::reactive) {
    const bool alarmed = std::any_of(next.alarms.begin(), next.alarms.end(),
                                     [&](const Alarm& a) { return a.round + 1 == current; });
    const AtomicCapability* patch = registry.find("patch");
    if (alarmed && patch && patch->kind == CapabilityKind::defense) {
      const Node* choice = nullptr;
      for (const auto& node : topology.nodes) {
        if (next.level(node.id) != CompromiseLevel::none ||
            next.has_defense(node.id, DefenseKind::patch)) {
          continue;
        }
        if (!choice || node.asset_value > choice->asset_value ||
            (node.asset_value == choice->asset_value && node.id < choice->id)) {
          choice = &node;
        }
      }
      if (choice) {
        Binding binding{{std::string(kTargetSlot), choice->id}};
        if (evaluate_preconditions(*patch, next, topology, binding).holds) {
          auto applied = apply_capability(next, *patch, binding, topology, rng);
          next = std::move(applied.state);
          result.events.push_back(
              make_event(current, Actor::defender, patch->id, choice->id, applied.outcome));
        }
      }
    }
  }

  if (next.trapped_until > current) return result;

  std::vector<Candidate> options;
  for (auto& c : applicable_capabilities(registry, next, topology, Actor::attacker,
                                         node_ids(topology))) {
    if (!next.settled_actions.contains(c.key())) options.push_back(std::move(c));
  }
  if (options.empty()) {
    result.attacker_idle = true;
    return result;
  }

  std::size_t pick = 0;
  switch (policies.attacker) {
    case AttackerPolicy::greedy_value:
      for (std::size_t i = 1; i < options.size(); ++i) {
        if (asset_value(topology, options[i].target()) >
            asset_value(topology, options[pick].target())) {
          pick = i;
        }
      }
      break;
    case AttackerPolicy::cheapest_step:
      // Candidates are already ordered by cost first.
      break;
    case AttackerPolicy::uniform_random:
      pick = rng.below(options.size());
      break;
  }

  const Candidate& chosen = options[pick];
  auto applied = apply_capability(next, *chosen.capability, chosen.binding, topology, rng);
  next = std::move(applied.state);
  if (applied.outcome.success) next.settled_actions.insert(chosen.key());
  result.events.push_back(make_event(current, Actor::attacker, chosen.capability->id,
                                     chosen.target(), applied.outcome));
  return result;
}

Metrics compute_metrics(const SimulationTrace& trace, const std::vector<Objective>& objectives,
                        const NetworkTopology& topology, const CapabilityRegistry& registry) {
  Metrics m;
  const SimulationState& final_state = trace.final_state;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const auto& o = objectives[i];
    auto round = objective_round(o, final_state, trace.events, topology);
    m.objectives_met[i] = round.has_value();
    if (o.actor == Actor::attacker && round) {
      m.attacker_succeeded = true;
      if (!m.time_to_first_objective || *round < *m.time_to_first_objective) {
        m.time_to_first_objective = *round;
      }
    }
  }
  m.total_nodes = topology.nodes.size();
  for (const auto& node : topology.nodes) {
    m.compromised_nodes += final_state.level(node.id) != CompromiseLevel::none;
  }
  m.compromised_fraction =
      m.total_nodes == 0 ? 0.0
                         : static_cast<double>(m.compromised_nodes) /
                               static_cast<double>(m.total_nodes);
  for (const auto& e : trace.events) {
    if (e.actor != Actor::attacker) continue;
    m.detection_count += e.outcome.detected;
    if (const auto* cap = registry.find(e.capability_id)) m.attacker_cost_spent += cap->cost_units;
  }
  return m;
}

namespace {

struct Prepared {
  NetworkTopology topology;
  std::string digest;
};

Prepared prepare(const ScenarioSpec& spec, const DefenseStrategy& strategy, const CapabilityRegistry& registry,
                 const SimulationConfig& config) {
  if (config.max_rounds < 1) throw Error(Errc::InvariantViolation, "max_rounds must be >= 1");
  const ValidationReport report = validate_spec(spec, registry);
  if (!report.valid()) {
    const auto& first = report.errors.front();
    throw Error(Errc::InvalidScenario, first.code + " at " + first.location + ": " + first.message);
  }
  Prepared p{resolve_topology(spec, registry), scenario_digest(spec)};
  try {
    compose_strategy(registry, strategy.capability_placements, &p.topology);
  } catch (const Error& e) {
    throw Error(Errc::InvalidStrategy, e.what());
  }
  return p;
}

SimulationResult execute(const Prepared& prepared, const ScenarioSpec& spec, const DefenseStrategy& strategy,
                         const CapabilityRegistry& registry, const SimulationConfig& config) {
  const NetworkTopology& topology = prepared.topology;
  Rng rng = Rng::substream(config.seed, "simulation");
  SimulationState state = initial_state(topology);
  for (const auto& placement : strategy.capability_placements) {
    const AtomicCapability& cap = *registry.find(placement.capability_id);
    Binding binding{{std::string(kTargetSlot), placement.target_node}};
    if (!evaluate_preconditions(cap, state, topology, binding).holds) continue;
    state = apply_capability(state, cap, binding, topology, rng).state;
  }

  const Policies policies{config.attacker_policy, config.defender_policy};
  std::vector<SimEvent> events;
  std::uint32_t idle = 0;
  while (state.round < config.max_rounds) {
    auto round = step_round(state, topology, registry, policies, config.max_rounds, rng);
    state = std::move(round.state);
    events.insert(events.end(), round.events.begin(), round.events.end());
    idle = round.attacker_idle ? idle + 1 : 0;
    if (attacker_objectives_met(spec.objectives, state, events, topology)) break;
    if (idle >= kStallRounds) break;
  }

  SimulationResult result;
  result.trace = {config, prepared.digest, std::move(events), std::move(state)};
  result.metrics = compute_metrics(result.trace, spec.objectives, topology, registry);
  return result;
}

}  // namespace

SimulationResult run_simulation(const ScenarioSpec& spec, const DefenseStrategy& strategy,
                                const CapabilityRegistry& registry,
                                const SimulationConfig& config) {
  return execute(prepare(spec, strategy, registry, config), spec, strategy, registry, config);
}

BatchResult aggregate(std::vector<Metrics> per_seed) {
  BatchResult out;
  std::uint64_t compromised = 0;
  std::uint64_t total = 0;
  std::uint64_t successes = 0;
  std::uint64_t detections = 0;
  for (const auto& m : per_seed) {
    compromised += m.compromised_nodes;
    total += m.total_nodes;
    successes += m.attacker_succeeded;
    detections += m.detection_count;
  }
  const auto n = static_cast<double>(per_seed.size());
  out.mean_compromised_fraction =
      total == 0 ? 0.0 : static_cast<double>(compromised) / static_cast<double>(total);
  out.attacker_success_rate = per_seed.empty() ? 0.0 : static_cast<double>(successes) / n;
  out.mean_detection_count = per_seed.empty() ? 0.0 : static_cast<double>(detections) / n;
  out.per_seed = std::move(per_seed);
  return out;
}

BatchResult batch_run(const ScenarioSpec& spec, const DefenseStrategy& strategy,
                      const CapabilityRegistry& registry, const SimulationConfig& config,
                      std::size_t n, unsigned threads) {
  if (n < 1) throw Error(Errc::InvariantViolation, "batch size must be >= 1");
  // Surface InvalidScenario / InvalidStrategy on the calling thread.
  const Prepared prepared = prepare(spec, strategy, registry, config);
  std::vector<Metrics> per_seed(n);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) {
        SimulationConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(i);
        per_seed[i] = execute(prepared, spec, strategy, registry, c).metrics;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return aggregate(std::move(per_seed));
}

}  // namespace rangesim
