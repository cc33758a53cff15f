#include "rangesim/forge.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

#include "json_support.hpp"
#include "rangesim/attack_graph.hpp"

namespace rangesim {

using namespace json_support;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kOpportunisticVulnRate = 0.5;
constexpr double kTargetedVulnRate = 0.3;
constexpr double kForgeDensity = 0.5;
constexpr double kForgeCredentialRate = 0.2;
constexpr std::size_t kDefensePathCount = 10;
constexpr std::size_t kOpportunisticMaxCost = 2;
constexpr double kRefineVulnSuccess = 0.5;
constexpr double kRefineVulnDetection = 0.2;
constexpr std::string_view kRefineTechnique = "T1190";

std::string_view to_string(AttackerProfile p) {
  return p == AttackerProfile::opportunistic ? "opportunistic" : "targeted";
}

std::vector<NodeClass> dedup(const std::vector<NodeClass>& classes) {
  std::vector<NodeClass> out;
  for (auto c : classes) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

bool is_entry_class(NodeClass c) {
  return c == NodeClass::maintenance_endpoint || c == NodeClass::workstation;
}

const Objective* first_attacker_compromise(const std::vector<Objective>& objectives) {
  for (const auto& o : objectives) {
    if (o.actor == Actor::attacker && o.kind == ObjectiveKind::compromise) return &o;
  }
  return nullptr;
}

// --- default agents ---------------------------------------------------------

class ContextAnalyst final : public Agent {
 public:
  AgentRoleId role() const override { return AgentRoleId::context_analyst; }
  std::string run(const Blackboard& board, BlackboardSlots& out, const CapabilityRegistry&,
                  std::uint64_t) const override {
    const auto& req = board.requirement;
    ContextProfile p;
    p.domain_tag = req.domain_tag;
    p.narrative = req.narrative;
    p.asset_classes = dedup(req.constraints.required_classes);
    for (auto cls : p.asset_classes) {
      const std::string name(rangesim::to_string(cls));
      p.problem_decomposition.push_back(
          {"secure-" + name, "Keep " + name + " assets of " + req.domain_tag + " out of attacker hands",
           {cls}});
    }
    const bool opportunistic = req.constraints.attacker_profile == AttackerProfile::opportunistic;
    p.threat_actor = std::string(to_string(req.constraints.attacker_profile)) + "-attacker";
    p.vuln_rate = opportunistic ? kOpportunisticVulnRate : kTargetedVulnRate;
    p.credential_rate = kForgeCredentialRate;
    p.intra_zone_density = kForgeDensity;
    out.context_profile = p;
    return std::to_string(p.asset_classes.size()) + " asset classes, vuln_rate " +
           (opportunistic ? "0.5" : "0.3");
  }
};

class TopologySynthesizer final : public Agent {
 public:
  AgentRoleId role() const override { return AgentRoleId::topology_synthesizer; }
  std::string run(const Blackboard& board, BlackboardSlots& out,
                  const CapabilityRegistry& registry, std::uint64_t seed) const override {
    const auto& c = board.requirement.constraints;
    const auto& profile = *board.slots.context_profile;
    std::vector<NodeClass> classes = profile.asset_classes;
    if (classes.empty()) classes.push_back(c.target_class);

    TopologyRecipe recipe;
    for (auto cls : classes) recipe.count(cls) = 1;
    std::uint64_t used = classes.size();
    std::uint64_t spare = c.max_nodes > used ? c.max_nodes - used : 0;
    if (spare >= 2) {
      recipe.zone_count = 2;
      recipe.inter_zone_gateways = 1;
      if (recipe.count(NodeClass::gateway) == 0) {
        recipe.count(NodeClass::gateway) = 1;
        --spare;
      }
    }
    const std::uint64_t extra = spare / 2;
    for (std::uint64_t i = 0; i < extra; ++i) ++recipe.count(classes[i % classes.size()]);
    recipe.intra_zone_density = profile.intra_zone_density;
    recipe.vuln_rate = profile.vuln_rate;
    recipe.credential_rate = profile.credential_rate;

    out.topology_draft = build_topology(recipe, registry, seed);
    return "built " + std::to_string(out.topology_draft->nodes.size()) + " nodes, " +
           std::to_string(out.topology_draft->edges.size()) + " edges in " +
           std::to_string(recipe.zone_count) + " zones";
  }
};

class ThreatPlanner final : public Agent {
 public:
  AgentRoleId role() const override { return AgentRoleId::threat_planner; }
  std::string run(const Blackboard& board, BlackboardSlots& out,
                  const CapabilityRegistry& registry, std::uint64_t) const override {
    const auto& c = board.requirement.constraints;
    const auto& t = *board.slots.topology_draft;
    const auto cls_selector = TargetSelector::of_class(c.target_class);
    const auto matching = select_nodes(t, cls_selector);

    ThreatPlan plan;
    plan.objectives.push_back({Actor::attacker, ObjectiveKind::compromise,
                               matching.empty() ? cls_selector : TargetSelector::node(matching.front()),
                               1.0});
    plan.objectives.push_back({Actor::defender, ObjectiveKind::protect, cls_selector, 1.0});
    plan.objectives.push_back({Actor::defender, ObjectiveKind::detect, cls_selector, 1.0});

    const bool opportunistic = c.attacker_profile == AttackerProfile::opportunistic;
    for (const auto& [id, cap] : registry) {
      if (cap.kind != CapabilityKind::attack) continue;
      if (opportunistic && cap.cost_units > kOpportunisticMaxCost) continue;
      plan.capability_refs.push_back(id);
    }
    out.threat_plan = plan;
    return "attacker objective on " + plan.objectives.front().target.describe() + ", " +
           std::to_string(plan.capability_refs.size()) + " attack capabilities";
  }
};

class DefensePlanner final : public Agent {
 public:
  AgentRoleId role() const override { return AgentRoleId::defense_planner; }
  std::string run(const Blackboard& board, BlackboardSlots& out,
                  const CapabilityRegistry& registry, std::uint64_t) const override {
    const auto& t = *board.slots.topology_draft;
    DefenseStrategy strategy;
    const Objective* goal = first_attacker_compromise(board.slots.threat_plan->objectives);
    std::vector<AttackPath> paths;
    const auto entries = entry_surface(t, registry);
    if (goal && !entries.empty()) {
      try {
        paths = enumerate_attack_paths(t, registry, {entries, goal->target, kDefensePathCount, 8});
      } catch (const Error&) {
        paths.clear();
      }
    }
    if (!paths.empty()) {
      const auto& first = paths.front().steps.front();
      const NodeId entry = first.source == kExternal ? first.target : first.source;
      auto place = [&](std::string_view cap, const NodeId& node) {
        if (!registry.find(cap)) return;
        Placement p{std::string(cap), node};
        auto& v = strategy.capability_placements;
        if (std::find(v.begin(), v.end(), p) == v.end()) v.push_back(std::move(p));
      };
      place("honeypot", entry);
      place("data_encryption", entry);
      const auto picks = suggest_defense_placements(t, paths, 1);
      if (!picks.empty()) place("shocktrap", picks.front().first);
    }
    out.defense_plan = strategy;
    return std::to_string(strategy.capability_placements.size()) + " placements over " +
           std::to_string(paths.size()) + " paths";
  }
};

class Validator final : public Agent {
 public:
  AgentRoleId role() const override { return AgentRoleId::validator; }
  std::string run(const Blackboard& board, BlackboardSlots& out,
                  const CapabilityRegistry& registry, std::uint64_t) const override {
    const auto& req = board.requirement;
    const auto& t = *board.slots.topology_draft;
    const auto spec = assemble_spec(board);
    ValidatorVerdict verdict;
    verdict.report = validate_spec(spec, registry);

    try {
      compose_strategy(registry, board.slots.defense_plan->capability_placements, &t);
    } catch (const Error& e) {
      verdict.report.errors.push_back({"InvalidDefensePlan", e.what(), "defense_plan"});
    }

    const auto entries = entry_surface(t, registry);
    const bool budget_left = t.nodes.size() < req.constraints.max_nodes;
    auto add_hint = [&](RefinementHint h) {
      if (std::find(verdict.hints.begin(), verdict.hints.end(), h) == verdict.hints.end()) {
        verdict.hints.push_back(std::move(h));
      }
    };

    if (entries.empty() && budget_left) {
      NodeClass cls = NodeClass::maintenance_endpoint;
      for (auto c : req.constraints.required_classes) {
        if (is_entry_class(c)) {
          cls = c;
          break;
        }
      }
      add_hint(hint::AddEntrySurface{cls});
    }

    for (std::size_t i = 0; i < spec.objectives.size(); ++i) {
      const auto& o = spec.objectives[i];
      if (o.actor != Actor::attacker || o.kind != ObjectiveKind::compromise) continue;
      const auto targets = select_nodes(t, o.target);
      if (targets.empty()) {
        if (budget_left) add_hint(hint::RaiseNodeBudget{});
        continue;
      }
      const std::string where = "objectives[" + std::to_string(i) + "]";
      if (entries.empty()) {
        verdict.report.errors.push_back(
            {"NoAttackPath", "no entry surface to reach " + o.target.describe(), where});
        continue;
      }
      if (!enumerate_attack_paths(t, registry, {entries, o.target, 1, 8}).empty()) continue;
      verdict.report.errors.push_back(
          {"NoAttackPath", "no attack path reaches " + o.target.describe(), where});

      const auto reach = reachable_set(t, registry, entries);
      const std::set<NodeId> in_reach(reach.begin(), reach.end());
      std::optional<NodeId> adjacent_target;
      for (const auto& target : targets) {
        if (in_reach.count(target)) continue;
        for (const auto& u : reach) {
          if (connects(t, u, target)) {
            adjacent_target = target;
            break;
          }
        }
        if (adjacent_target) break;
      }
      if (adjacent_target) {
        add_hint(hint::AddVulnerability{*adjacent_target, AccessRequirement::network});
      } else {
        for (const auto& target : targets) {
          if (!in_reach.count(target)) {
            add_hint(hint::AddEdge{reach.front(), target});
            break;
          }
        }
      }
    }

    std::stable_sort(verdict.hints.begin(), verdict.hints.end(),
                     [](const RefinementHint& a, const RefinementHint& b) {
                       return a.index() < b.index();
                     });
    out.validation_report = verdict;
    return std::to_string(verdict.report.errors.size()) + " errors, " +
           std::to_string(verdict.hints.size()) + " hints";
  }
};

// --- refine helpers ---------------------------------------------------------

NodeId fresh_node_id(const NetworkTopology& t, NodeClass cls) {
  for (std::size_t k = 1;; ++k) {
    NodeId id = std::string(rangesim::to_string(cls)) + "-" + std::to_string(k);
    if (!find_node(t, id)) return id;
  }
}

void add_connected_node(NetworkTopology& t, NodeClass cls) {
  if (t.zones.empty()) t.zones.push_back("zone_1");
  const std::string zone = *std::min_element(t.zones.begin(), t.zones.end());
  std::optional<NodeId> peer;
  for (const auto& n : t.nodes) {
    if (n.zone == zone && (!peer || n.id < *peer)) peer = n.id;
  }
  if (!peer) {
    for (const auto& n : t.nodes) {
      if (!peer || n.id < *peer) peer = n.id;
    }
  }
  Node node = make_default_node(cls, fresh_node_id(t, cls), zone);
  if (peer) {
    const Node* other = find_node(t, *peer);
    t.edges.push_back({node.id, *peer, default_link_protocol(cls, other->cls), true});
  }
  t.nodes.push_back(std::move(node));
}

Node& require_node(NetworkTopology& t, const NodeId& id) {
  for (auto& n : t.nodes) {
    if (n.id == id) return n;
  }
  throw Error(Errc::InvariantViolation, "hint names unknown node '" + id + "'");
}

void apply_hint(NetworkTopology& t, const Requirement& req, const RefinementHint& h) {
  std::visit(overloaded{
                 [&](const hint::AddEntrySurface& x) { add_connected_node(t, x.cls); },
                 [&](const hint::RaiseNodeBudget&) {
                   add_connected_node(t, req.constraints.target_class);
                 },
                 [&](const hint::AddVulnerability& x) {
                   Node& node = require_node(t, x.node);
                   std::string id = "vuln-" + x.node;
                   for (std::size_t k = 2; find_vulnerability(t, id); ++k) {
                     id = "vuln-" + x.node + "-" + std::to_string(k);
                   }
                   node.vulnerability_ids.push_back(id);
                   t.vulnerabilities.push_back({id, std::string(kRefineTechnique), x.access,
                                                kRefineVulnSuccess, kRefineVulnDetection,
                                                Privilege::user});
                 },
                 [&](const hint::AddEdge& x) {
                   const Node& a = require_node(t, x.src);
                   const Node& b = require_node(t, x.dst);
                   const bool exists =
                       std::any_of(t.edges.begin(), t.edges.end(), [&](const Edge& e) {
                         return (e.src == x.src && e.dst == x.dst) ||
                                (e.bidirectional && e.src == x.dst && e.dst == x.src);
                       });
                   if (!exists) {
                     t.edges.push_back({x.src, x.dst, default_link_protocol(a.cls, b.cls), true});
                   }
                 },
             },
             h);
}

OrderedJson hint_json(const RefinementHint& h) {
  OrderedJson j;
  std::visit(overloaded{
                 [&](const hint::AddEntrySurface& x) {
                   j["hint"] = "add_entry_surface";
                   j["class"] = std::string(rangesim::to_string(x.cls));
                 },
                 [&](const hint::AddVulnerability& x) {
                   j["hint"] = "add_vulnerability";
                   j["node"] = x.node;
                   j["access"] = std::string(rangesim::to_string(x.access));
                 },
                 [&](const hint::AddEdge& x) {
                   j["hint"] = "add_edge";
                   j["src"] = x.src;
                   j["dst"] = x.dst;
                 },
                 [&](const hint::RaiseNodeBudget&) { j["hint"] = "raise_node_budget"; },
             },
             h);
  return j;
}

std::string fmt_classes(const std::vector<NodeClass>& classes) {
  std::string s;
  for (auto c : classes) {
    if (!s.empty()) s += ",";
    s += rangesim::to_string(c);
  }
  return s;
}

}  // namespace

// --- requirement documents --------------------------------------------------

Requirement parse_requirement(std::string_view document) {
  const Json root = parse_text(document);
  ObjectReader r(root, "");
  Requirement req;
  req.domain_tag = r.identifier("domain_tag");
  req.narrative = r.string("narrative");
  ObjectReader c(r.required("constraints"), "constraints");
  req.constraints.max_nodes =
      static_cast<std::uint32_t>(c.integer("max_nodes", 1, std::numeric_limits<std::uint32_t>::max()));
  const auto& classes = expect_array(c.required("required_classes"), c.path_of("required_classes"));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    req.constraints.required_classes.push_back(
        as_node_class(classes[i], index(c.path_of("required_classes"), i)));
  }
  const std::string profile = c.string("attacker_profile");
  if (profile == "opportunistic") {
    req.constraints.attacker_profile = AttackerProfile::opportunistic;
  } else if (profile == "targeted") {
    req.constraints.attacker_profile = AttackerProfile::targeted;
  } else {
    violation(c.path_of("attacker_profile"), "expected opportunistic or targeted");
  }
  req.constraints.target_class = as_node_class(c.required("target_class"), c.path_of("target_class"));
  c.finish();
  r.finish();
  if (req.constraints.max_nodes < dedup(req.constraints.required_classes).size()) {
    violation("constraints.max_nodes", "smaller than the number of required classes");
  }
  return req;
}

std::string serialize_requirement(const Requirement& requirement) {
  OrderedJson j;
  j["domain_tag"] = requirement.domain_tag;
  j["narrative"] = requirement.narrative;
  OrderedJson c;
  c["max_nodes"] = requirement.constraints.max_nodes;
  OrderedJson classes = OrderedJson::array();
  for (auto cls : requirement.constraints.required_classes) {
    classes.push_back(std::string(rangesim::to_string(cls)));
  }
  c["required_classes"] = classes;
  c["attacker_profile"] = std::string(to_string(requirement.constraints.attacker_profile));
  c["target_class"] = std::string(rangesim::to_string(requirement.constraints.target_class));
  j["constraints"] = c;
  return dump(j);
}

// --- blackboard -------------------------------------------------------------

std::string describe(const RefinementHint& h) {
  return std::visit(
      overloaded{
          [](const hint::AddEntrySurface& x) {
            return "add_entry_surface(" + std::string(rangesim::to_string(x.cls)) + ")";
          },
          [](const hint::AddVulnerability& x) {
            return "add_vulnerability(" + x.node + ", " +
                   std::string(rangesim::to_string(x.access)) + ")";
          },
          [](const hint::AddEdge& x) { return "add_edge(" + x.src + ", " + x.dst + ")"; },
          [](const hint::RaiseNodeBudget&) { return std::string("raise_node_budget"); },
      },
      h);
}

std::string_view to_string(Slot slot) noexcept {
  switch (slot) {
    case Slot::context_profile: return "context_profile";
    case Slot::topology_draft: return "topology_draft";
    case Slot::threat_plan: return "threat_plan";
    case Slot::defense_plan: return "defense_plan";
    case Slot::validation_report: return "validation_report";
  }
  return "?";
}

std::string_view to_string(AgentRoleId role) noexcept {
  switch (role) {
    case AgentRoleId::context_analyst: return "context_analyst";
    case AgentRoleId::topology_synthesizer: return "topology_synthesizer";
    case AgentRoleId::threat_planner: return "threat_planner";
    case AgentRoleId::defense_planner: return "defense_planner";
    case AgentRoleId::validator: return "validator";
  }
  return "?";
}

bool BlackboardSlots::populated(Slot slot) const {
  switch (slot) {
    case Slot::context_profile: return context_profile.has_value();
    case Slot::topology_draft: return topology_draft.has_value();
    case Slot::threat_plan: return threat_plan.has_value();
    case Slot::defense_plan: return defense_plan.has_value();
    case Slot::validation_report: return validation_report.has_value();
  }
  return false;
}

void BlackboardSlots::clear(Slot slot) {
  switch (slot) {
    case Slot::context_profile: context_profile.reset(); break;
    case Slot::topology_draft: topology_draft.reset(); break;
    case Slot::threat_plan: threat_plan.reset(); break;
    case Slot::defense_plan: defense_plan.reset(); break;
    case Slot::validation_report: validation_report.reset(); break;
  }
}

bool BlackboardSlots::same(Slot slot, const BlackboardSlots& other) const {
  switch (slot) {
    case Slot::context_profile: return context_profile == other.context_profile;
    case Slot::topology_draft: return topology_draft == other.topology_draft;
    case Slot::threat_plan: return threat_plan == other.threat_plan;
    case Slot::defense_plan: return defense_plan == other.defense_plan;
    case Slot::validation_report: return validation_report == other.validation_report;
  }
  return false;
}

const std::array<AgentRole, 5>& pipeline_roles() {
  static const std::array<AgentRole, 5> roles = {{
      {AgentRoleId::context_analyst, {}, {Slot::context_profile}},
      {AgentRoleId::topology_synthesizer, {Slot::context_profile}, {Slot::topology_draft}},
      {AgentRoleId::threat_planner, {Slot::context_profile, Slot::topology_draft},
       {Slot::threat_plan}},
      {AgentRoleId::defense_planner, {Slot::topology_draft, Slot::threat_plan},
       {Slot::defense_plan}},
      {AgentRoleId::validator,
       {Slot::context_profile, Slot::topology_draft, Slot::threat_plan, Slot::defense_plan},
       {Slot::validation_report}},
  }};
  return roles;
}

const AgentRole& role_of(AgentRoleId id) {
  return pipeline_roles()[static_cast<std::size_t>(id)];
}

const AgentSet& default_agents() {
  static const AgentSet agents = {
      {AgentRoleId::context_analyst, std::make_shared<ContextAnalyst>()},
      {AgentRoleId::topology_synthesizer, std::make_shared<TopologySynthesizer>()},
      {AgentRoleId::threat_planner, std::make_shared<ThreatPlanner>()},
      {AgentRoleId::defense_planner, std::make_shared<DefensePlanner>()},
      {AgentRoleId::validator, std::make_shared<Validator>()},
  };
  return agents;
}

Blackboard agent_step(AgentRoleId role, const Blackboard& board,
                      const CapabilityRegistry& registry, std::uint64_t seed,
                      const AgentSet& agents) {
  const AgentRole& r = role_of(role);
  for (Slot s : r.consumes) {
    if (!board.slots.populated(s)) {
      throw Error(Errc::MissingConsumedSlot, std::string(to_string(role)) + " needs " +
                                                 std::string(to_string(s)));
    }
  }
  const auto it = agents.find(role);
  if (it == agents.end() || !it->second) {
    throw Error(Errc::InvariantViolation, "no agent for role " + std::string(to_string(role)));
  }
  if (it->second->role() != role) {
    throw Error(Errc::SlotOwnershipViolation,
                "agent registered for " + std::string(to_string(role)) + " reports role " +
                    std::string(to_string(it->second->role())));
  }

  BlackboardSlots out = board.slots;
  std::string summary = it->second->run(board, out, registry, seed);

  for (const auto& other : pipeline_roles()) {
    for (Slot s : other.produces) {
      const bool owned = std::find(r.produces.begin(), r.produces.end(), s) != r.produces.end();
      if (!owned && !out.same(s, board.slots)) {
        throw Error(Errc::SlotOwnershipViolation, std::string(to_string(role)) + " wrote " +
                                                      std::string(to_string(s)));
      }
    }
  }
  for (Slot s : r.produces) {
    if (!out.populated(s)) {
      throw Error(Errc::SlotOwnershipViolation, std::string(to_string(role)) + " left " +
                                                    std::string(to_string(s)) + " empty");
    }
  }

  Blackboard next = board;
  next.slots = std::move(out);
  next.revision = board.revision + 1;
  next.agent_log.push_back({role, next.revision, std::move(summary)});
  return next;
}

Blackboard refine(const Blackboard& board, const ValidatorVerdict& verdict) {
  if (verdict.hints.empty()) throw Error(Errc::NoHintsAvailable, "validation report carries no hints");
  if (!board.slots.topology_draft) {
    throw Error(Errc::MissingConsumedSlot, "refine needs topology_draft");
  }
  const auto first = std::min_element(
      verdict.hints.begin(), verdict.hints.end(),
      [](const RefinementHint& a, const RefinementHint& b) { return a.index() < b.index(); });

  Blackboard next = board;
  apply_hint(*next.slots.topology_draft, board.requirement, *first);
  next.slots.clear(Slot::threat_plan);
  next.slots.clear(Slot::defense_plan);
  next.slots.clear(Slot::validation_report);
  next.revision = board.revision + 1;
  next.agent_log.push_back({AgentRoleId::topology_synthesizer, next.revision,
                            "refine " + describe(*first)});
  return next;
}

ScenarioSpec assemble_spec(const Blackboard& board) {
  const auto& s = board.slots;
  if (!s.context_profile || !s.topology_draft || !s.threat_plan) {
    throw Error(Errc::MissingConsumedSlot,
                "assembling a scenario needs context_profile, topology_draft and threat_plan");
  }
  ScenarioSpec spec;
  spec.domain_context = {board.requirement.domain_tag, board.requirement.narrative};
  spec.problem_decomposition = s.context_profile->problem_decomposition;
  spec.scenario_parameters.explicit_topology = *s.topology_draft;
  spec.objectives = s.threat_plan->objectives;
  spec.elements.asset_classes = s.context_profile->asset_classes;
  spec.elements.threat_actors = {s.context_profile->threat_actor};
  auto& refs = spec.elements.capability_refs;
  refs = s.threat_plan->capability_refs;
  if (s.defense_plan) {
    for (const auto& p : s.defense_plan->capability_placements) {
      if (std::find(refs.begin(), refs.end(), p.capability_id) == refs.end()) {
        refs.push_back(p.capability_id);
      }
    }
  }
  return spec;
}

GenerationFailed::GenerationFailed(GenerationReport report)
    : Error(Errc::GenerationFailed,
            "no valid scenario after " + std::to_string(report.iterations_used) + " iterations"),
      report_(std::move(report)) {}

GenerationResult run_pipeline(const Requirement& requirement, const CapabilityRegistry& registry,
                              std::uint64_t seed, std::uint32_t max_iterations,
                              const AgentSet& agents) {
  if (requirement.narrative.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(Errc::EmptyRequirement, "requirement narrative is empty");
  }
  const auto& c = requirement.constraints;
  if (c.max_nodes < 1 || c.max_nodes < dedup(c.required_classes).size()) {
    throw Error(Errc::InvariantViolation,
                "max_nodes must be positive and cover the required classes (" +
                    fmt_classes(c.required_classes) + ")");
  }
  if (max_iterations < 1) throw Error(Errc::InvariantViolation, "max_iterations must be >= 1");

  Blackboard board;
  board.requirement = requirement;
  auto step = [&](AgentRoleId role) { board = agent_step(role, board, registry, seed, agents); };
  for (const auto& role : pipeline_roles()) step(role.id);

  GenerationReport report;
  for (std::uint32_t iteration = 1;; ++iteration) {
    const ValidatorVerdict verdict = *board.slots.validation_report;
    report.iterations_used = iteration;
    report.per_iteration_reports.push_back(verdict.report);
    if (verdict.report.valid()) {
      report.final_valid = true;
      break;
    }
    if (iteration >= max_iterations) break;
    if (verdict.hints.empty()) {
      step(AgentRoleId::validator);
      continue;
    }
    board = refine(board, verdict);
    report.refinements_applied.push_back(*std::min_element(
        verdict.hints.begin(), verdict.hints.end(),
        [](const RefinementHint& a, const RefinementHint& b) { return a.index() < b.index(); }));
    step(AgentRoleId::threat_planner);
    step(AgentRoleId::defense_planner);
    step(AgentRoleId::validator);
  }

  if (!report.final_valid) throw GenerationFailed(std::move(report));
  GenerationResult result{assemble_spec(board), std::move(report), *board.slots.defense_plan,
                          board};
  return result;
}

std::string serialize_generation_report(const GenerationReport& report) {
  OrderedJson j;
  j["iterations_used"] = report.iterations_used;
  j["final_valid"] = report.final_valid;
  OrderedJson reports = OrderedJson::array();
  for (const auto& r : report.per_iteration_reports) {
    reports.push_back(OrderedJson::parse(serialize_report(r)));
  }
  j["per_iteration_reports"] = reports;
  OrderedJson hints = OrderedJson::array();
  for (const auto& h : report.refinements_applied) hints.push_back(hint_json(h));
  j["refinements_applied"] = hints;
  return dump(j);
}

}  // namespace rangesim
