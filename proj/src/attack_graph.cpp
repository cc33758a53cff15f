#include "rangesim/attack_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "rangesim/error.hpp"

namespace rangesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool compromises_target(const AtomicCapability& cap) {
  return std::any_of(cap.effects.begin(), cap.effects.end(), [](const Effect& e) {
    const auto* c = std::get_if<effect::Compromise>(&e);
    return c && c->node == kTargetSlot;
  });
}

bool has_foothold_requirement(const AtomicCapability& cap) {
  return std::any_of(cap.preconditions.begin(), cap.preconditions.end(), [](const Predicate& p) {
    return std::holds_alternative<pred::ActorHasFoothold>(p);
  });
}

bool has_source_edge(const AtomicCapability& cap) {
  return std::any_of(cap.preconditions.begin(), cap.preconditions.end(), [](const Predicate& p) {
    const auto* e = std::get_if<pred::EdgeExists>(&p);
    return e && e->src == kSourceSlot && e->dst == kTargetSlot;
  });
}

bool is_entry_capability(const AtomicCapability& cap) {
  return cap.kind == CapabilityKind::attack && compromises_target(cap) &&
         !cap.references_slot(kSourceSlot) && !has_foothold_requirement(cap);
}

bool is_hop_capability(const AtomicCapability& cap) {
  return cap.kind == CapabilityKind::attack && compromises_target(cap) && has_source_edge(cap);
}

bool credential_exists_for(const NetworkTopology& topology, const NodeId& node) {
  return std::any_of(topology.credentials.begin(), topology.credentials.end(),
                     [&](const Credential& c) {
                       return c.stored_on != node &&
                              std::find(c.grants_access_to.begin(), c.grants_access_to.end(),
                                        node) != c.grants_access_to.end();
                     });
}

bool statically_holds(const Predicate& predicate, const NetworkTopology& topology,
                      const Binding& binding) {
  auto node_of = [&](const std::string& slot) -> const NodeId& {
    auto it = binding.find(slot);
    if (it == binding.end()) throw Error(Errc::UnboundSlot, "slot '" + slot + "'");
    return it->second;
  };
  return std::visit(
      overloaded{
          [&](const pred::ActorHasFoothold& p) { return p.node == kSourceSlot; },
          [&](const pred::EdgeExists& p) {
            return connects(topology, node_of(p.src), node_of(p.dst));
          },
          [&](const pred::NodeHasVulnWithAccess& p) {
            const Node* n = find_node(topology, node_of(p.node));
            return n && best_vulnerability(topology, *n, p.access, nullptr) != nullptr;
          },
          [&](const pred::CredentialHeld& p) {
            return credential_exists_for(topology, node_of(p.granting_access_to));
          },
          [&](const pred::DefenseAbsent&) { return true; },
          [&](const pred::DefensePresent&) { return false; },
          [&](const pred::NodeClassIs& p) {
            const Node* n = find_node(topology, node_of(p.node));
            return n && std::find(p.classes.begin(), p.classes.end(), n->cls) != p.classes.end();
          },
          [&](const pred::NodeNotCompromised& p) { return p.node != kSourceSlot; },
          [&](const pred::AssetValueAbove& p) {
            const Node* n = find_node(topology, node_of(p.node));
            return n && n->asset_value > p.threshold;
          },
      },
      predicate);
}

std::optional<AttackStep> best_step(const NetworkTopology& topology,
                                    const CapabilityRegistry& registry, const Binding& binding,
                                    bool entry) {
  std::optional<AttackStep> best;
  for (const auto& [id, cap] : registry) {
    if (entry ? !is_entry_capability(cap) : !is_hop_capability(cap)) continue;
    const bool ok = std::all_of(cap.preconditions.begin(), cap.preconditions.end(),
                                [&](const Predicate& p) {
                                  return statically_holds(p, topology, binding);
                                });
    if (!ok) continue;
    const double prob = effective_odds(cap, topology, binding, nullptr).success;
    if (best && !(prob > best->step_prob ||
                  (prob == best->step_prob && cap.cost_units < best->step_cost))) {
      continue;
    }
    auto src = binding.find(kSourceSlot);
    best = AttackStep{entry ? std::string(kExternal) : src->second, cap.id,
                      binding.find(kTargetSlot)->second, prob, cap.cost_units};
  }
  return best;
}

void require_node(const NetworkTopology& topology, const NodeId& id) {
  if (!find_node(topology, id)) throw Error(Errc::UnknownEntryNode, "entry '" + id + "'");
}

std::vector<NodeId> sorted_ids(const NetworkTopology& topology) {
  std::vector<NodeId> ids;
  for (const auto& n : topology.nodes) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::optional<AttackStep> best_entry_step(const NetworkTopology& topology,
                                          const CapabilityRegistry& registry,
                                          const NodeId& node) {
  return best_step(topology, registry, Binding{{std::string(kTargetSlot), node}}, true);
}

std::optional<AttackStep> best_hop_step(const NetworkTopology& topology,
                                        const CapabilityRegistry& registry, const NodeId& src,
                                        const NodeId& dst) {
  if (src == dst) return std::nullopt;
  return best_step(topology, registry,
                   Binding{{std::string(kTargetSlot), dst}, {std::string(kSourceSlot), src}},
                   false);
}

std::vector<NodeId> entry_surface(const NetworkTopology& topology,
                                  const CapabilityRegistry& registry) {
  std::vector<NodeId> out;
  for (const auto& id : sorted_ids(topology)) {
    if (best_entry_step(topology, registry, id)) out.push_back(id);
  }
  return out;
}

bool ranks_before(const AttackPath& a, const AttackPath& b) {
  if (a.success_prob != b.success_prob) return a.success_prob > b.success_prob;
  if (a.steps.size() != b.steps.size()) return a.steps.size() < b.steps.size();
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (a.steps[i].target != b.steps[i].target) return a.steps[i].target < b.steps[i].target;
  }
  return a.steps.front().source < b.steps.front().source;
}

PathScore score_path(const std::vector<AttackStep>& steps) {
  if (steps.empty()) throw Error(Errc::NonContiguousPath, "a path needs at least one step");
  PathScore score{1.0, 0};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0 && steps[i].source != steps[i - 1].target) {
      throw Error(Errc::NonContiguousPath, "step " + std::to_string(i) + " starts at '" +
                                               steps[i].source + "' but the previous step ended at '" +
                                               steps[i - 1].target + "'");
    }
    score.success_prob *= steps[i].step_prob;
    score.total_cost += steps[i].step_cost;
  }
  return score;
}

std::vector<AttackPath> enumerate_attack_paths(const NetworkTopology& topology,
                                               const CapabilityRegistry& registry,
                                               const PathQuery& query) {
  if (query.k < 1 || query.max_len < 1) {
    throw Error(Errc::InvariantViolation, "path queries need k >= 1 and max_len >= 1");
  }
  for (const auto& e : query.entries) require_node(topology, e);
  if (select_nodes(topology, query.target).empty()) {
    throw Error(Errc::TargetSelectorEmpty, query.target.describe() + " matches no node");
  }

  const std::vector<NodeId> ids = sorted_ids(topology);
  // Hops are static, so they are resolved once per ordered pair.
  std::map<std::pair<NodeId, NodeId>, std::optional<AttackStep>> hops;
  auto hop = [&](const NodeId& u, const NodeId& v) -> const std::optional<AttackStep>& {
    auto key = std::make_pair(u, v);
    auto it = hops.find(key);
    if (it == hops.end()) it = hops.emplace(key, best_hop_step(topology, registry, u, v)).first;
    return it->second;
  };
  std::set<NodeId> targets;
  for (const auto& id : select_nodes(topology, query.target)) targets.insert(id);

  std::vector<AttackPath> found;
  std::vector<AttackStep> steps;
  std::set<NodeId> visited;

  auto record = [&] {
    auto score = score_path(steps);
    found.push_back({steps, score.success_prob, score.total_cost});
  };

  auto dfs = [&](auto&& self, const NodeId& at) -> void {
    if (steps.size() >= query.max_len) return;
    for (const auto& next : ids) {
      if (visited.contains(next)) continue;
      const auto& step = hop(at, next);
      if (!step) continue;
      steps.push_back(*step);
      visited.insert(next);
      if (targets.contains(next)) record();
      self(self, next);
      visited.erase(next);
      steps.pop_back();
    }
  };

  std::set<NodeId> entries(query.entries.begin(), query.entries.end());
  for (const auto& entry : entries) {
    visited = {entry};
    steps.clear();
    if (auto first = best_entry_step(topology, registry, entry)) {
      steps.push_back(*first);
      if (targets.contains(entry)) record();
    }
    dfs(dfs, entry);
  }

  std::sort(found.begin(), found.end(), ranks_before);
  if (found.size() > query.k) found.resize(query.k);
  return found;
}

std::vector<NodeId> reachable_set(const NetworkTopology& topology,
                                  const CapabilityRegistry& registry,
                                  const std::vector<NodeId>& entries) {
  for (const auto& e : entries) require_node(topology, e);
  const std::vector<NodeId> ids = sorted_ids(topology);
  std::set<NodeId> seen(entries.begin(), entries.end());
  std::deque<NodeId> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    NodeId at = frontier.front();
    frontier.pop_front();
    for (const auto& next : ids) {
      if (seen.contains(next) || !best_hop_step(topology, registry, at, next)) continue;
      seen.insert(next);
      frontier.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<NodeId> non_entry_nodes(const AttackPath& path) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    if (i == 0 && path.steps[0].source == kExternal) continue;
    out.push_back(path.steps[i].target);
  }
  return out;
}

std::vector<std::pair<NodeId, DefenseKind>> suggest_defense_placements(
    const NetworkTopology& topology, const std::vector<AttackPath>& paths, std::size_t budget) {
  std::vector<std::set<NodeId>> candidates;
  for (const auto& p : paths) {
    auto nodes = non_entry_nodes(p);
    for (const auto& n : nodes) {
      if (!find_node(topology, n)) throw Error(Errc::UnknownNode, "path node '" + n + "'");
    }
    candidates.emplace_back(nodes.begin(), nodes.end());
  }

  std::vector<bool> hit(paths.size(), false);
  std::vector<std::pair<NodeId, DefenseKind>> picks;
  while (picks.size() < budget) {
    std::map<NodeId, std::size_t> counts;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (hit[i]) continue;
      for (const auto& n : candidates[i]) ++counts[n];
    }
    // std::map iterates ids in order, so strict > keeps the smallest id on ties.
    const NodeId* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [node, count] : counts) {
      if (count > best_count) {
        best = &node;
        best_count = count;
      }
    }
    if (!best) break;
    NodeId chosen = *best;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (candidates[i].contains(chosen)) hit[i] = true;
    }
    picks.emplace_back(std::move(chosen), DefenseKind::shocktrap);
  }
  return picks;
}

}  // namespace rangesim
