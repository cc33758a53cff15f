#include "rangesim/export.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "json_support.hpp"
#include "rangesim/error.hpp"

namespace rangesim {

using namespace json_support;

namespace {

bool bare_dot_id(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
  });
}

OrderedJson write_state(const SimulationState& s) {
  OrderedJson j;
  j["round"] = s.round;
  j["compromise"] = OrderedJson::object();
  for (const auto& [node, level] : s.compromise) j["compromise"][node] = std::string(to_string(level));
  j["footholds"] = OrderedJson::array();
  for (const auto& n : s.footholds) j["footholds"].push_back(n);
  j["deployed"] = OrderedJson::object();
  for (const auto& [node, kinds] : s.deployed) {
    OrderedJson arr = OrderedJson::array();
    for (auto k : kinds) arr.push_back(std::string(to_string(k)));
    j["deployed"][node] = arr;
  }
  j["credentials_held"] = OrderedJson::array();
  for (const auto& c : s.credentials_held) j["credentials_held"].push_back(c);
  j["trapped_until"] = s.trapped_until;
  j["alarms"] = OrderedJson::array();
  for (const auto& a : s.alarms) {
    OrderedJson alarm;
    alarm["round"] = a.round;
    alarm["node"] = a.node;
    j["alarms"].push_back(alarm);
  }
  j["compromised_at"] = OrderedJson::object();
  for (const auto& [node, round] : s.compromised_at) j["compromised_at"][node] = round;
  j["settled_actions"] = OrderedJson::array();
  for (const auto& a : s.settled_actions) j["settled_actions"].push_back(a);
  return j;
}

}  // namespace

std::string export_dot(const NetworkTopology& topology,
                       const std::optional<std::vector<AttackPath>>& highlighted) {
  using Line = std::pair<std::string, std::string>;
  std::set<Line> highlight;
  bool external = false;
  if (highlighted) {
    for (const auto& path : *highlighted) {
      for (const auto& step : path.steps) {
        const bool from_outside = step.source == kExternal;
        if ((!from_outside && !find_node(topology, step.source)) ||
            !find_node(topology, step.target)) {
          throw Error(Errc::UnknownPathNode,
                      "step " + step.source + " -> " + step.target + " leaves the topology");
        }
        if (from_outside) {
          external = true;
          highlight.emplace(std::string(kExternal), step.target);
          continue;
        }
        for (const auto& e : topology.edges) {
          if (e.src == step.source && e.dst == step.target) highlight.emplace(e.src, e.dst);
          if (e.bidirectional && e.src == step.target && e.dst == step.source) {
            highlight.emplace(e.src, e.dst);
          }
        }
      }
    }
  }

  std::string out = "digraph spidersim {\n";

  std::map<std::string, std::vector<const Node*>> by_zone;
  for (const auto& z : topology.zones) by_zone[z];
  for (const auto& n : topology.nodes) by_zone[n.zone].push_back(&n);
  for (auto& [zone, nodes] : by_zone) {
    std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) { return a->id < b->id; });
    const std::string name = "cluster_" + zone;
    out += "  subgraph " + (bare_dot_id(zone) ? name : "\"" + name + "\"") + " {\n";
    out += "    label=\"" + zone + "\";\n";
    for (const Node* n : nodes) {
      out += "    \"" + n->id + "\" [label=\"" + n->id + "\\n" + std::string(to_string(n->cls)) +
             "\"];\n";
    }
    out += "  }\n";
  }

  if (external) out += "  \"" + std::string(kExternal) + "\" [shape=diamond];\n";

  std::set<Line> lines;
  for (const auto& e : topology.edges) lines.emplace(e.src, e.dst);
  for (const auto& h : highlight) lines.insert(h);
  for (const auto& [src, dst] : lines) {
    out += "  \"" + src + "\" -> \"" + dst + "\"";
    if (highlight.contains({src, dst})) out += " [color=\"red\", penwidth=2]";
    out += ";\n";
  }

  out += "}\n";
  return out;
}

std::string export_trace(const SimulationTrace& trace) {
  OrderedJson j;
  j["config"]["max_rounds"] = trace.config.max_rounds;
  j["config"]["seed"] = trace.config.seed;
  j["config"]["attacker_policy"] = std::string(to_string(trace.config.attacker_policy));
  j["config"]["defender_policy"] = std::string(to_string(trace.config.defender_policy));
  j["scenario_digest"] = trace.scenario_digest;
  j["events"] = OrderedJson::array();
  for (const auto& e : trace.events) {
    OrderedJson event;
    event["round"] = e.round;
    event["actor"] = std::string(to_string(e.actor));
    event["capability_id"] = e.capability_id;
    event["target"] = e.target;
    event["outcome"]["success"] = e.outcome.success;
    event["outcome"]["detected"] = e.outcome.detected;
    event["outcome"]["trapped_for"] = e.outcome.trapped_for;
    j["events"].push_back(event);
  }
  j["final_state"] = write_state(trace.final_state);
  return dump(j);
}

std::string serialize_paths(const std::vector<AttackPath>& paths) {
  OrderedJson j;
  j["paths"] = OrderedJson::array();
  for (const auto& p : paths) {
    OrderedJson path;
    path["steps"] = OrderedJson::array();
    for (const auto& s : p.steps) {
      OrderedJson step;
      step["source"] = s.source;
      step["capability_id"] = s.capability_id;
      step["target"] = s.target;
      step["step_prob"] = s.step_prob;
      step["step_cost"] = s.step_cost;
      path["steps"].push_back(step);
    }
    path["success_prob"] = p.success_prob;
    path["total_cost"] = p.total_cost;
    j["paths"].push_back(path);
  }
  return dump(j);
}

std::vector<AttackPath> parse_paths_document(std::string_view text) {
  Json doc = parse_text(text);
  ObjectReader r(doc, "");
  std::vector<AttackPath> out;
  const auto& arr = expect_array(r.required("paths"), "paths");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader p(arr[i], index("paths", i));
    AttackPath path;
    const auto& steps = expect_array(p.required("steps"), p.path_of("steps"));
    for (std::size_t k = 0; k < steps.size(); ++k) {
      ObjectReader s(steps[k], index(p.path_of("steps"), k));
      AttackStep step;
      step.source = s.identifier("source");
      step.capability_id = s.identifier("capability_id");
      step.target = s.identifier("target");
      step.step_prob = s.fraction("step_prob");
      step.step_cost = static_cast<std::uint32_t>(s.integer("step_cost", 0, 1'000'000));
      s.finish();
      path.steps.push_back(std::move(step));
    }
    path.success_prob = p.fraction("success_prob");
    path.total_cost = static_cast<std::uint64_t>(
        p.integer("total_cost", 0, std::numeric_limits<std::int64_t>::max()));
    p.finish();
    auto score = score_path(path.steps);
    if (score.success_prob != path.success_prob || score.total_cost != path.total_cost) {
      violation(index("paths", i), "stored score does not match its steps");
    }
    out.push_back(std::move(path));
  }
  r.finish();
  return out;
}

std::string serialize_metrics(const Metrics& m) {
  OrderedJson j;
  j["objectives_met"] = OrderedJson::object();
  for (const auto& [i, met] : m.objectives_met) j["objectives_met"][std::to_string(i)] = met;
  j["time_to_first_objective"] = m.time_to_first_objective
                                     ? OrderedJson(*m.time_to_first_objective)
                                     : OrderedJson(nullptr);
  j["compromised_fraction"] = m.compromised_fraction;
  j["detection_count"] = m.detection_count;
  j["attacker_cost_spent"] = m.attacker_cost_spent;
  j["attacker_succeeded"] = m.attacker_succeeded;
  return dump(j);
}

std::string serialize_batch(const BatchResult& batch) {
  OrderedJson j;
  j["runs"] = batch.per_seed.size();
  j["mean_compromised_fraction"] = batch.mean_compromised_fraction;
  j["attacker_success_rate"] = batch.attacker_success_rate;
  j["mean_detection_count"] = batch.mean_detection_count;
  return dump(j);
}

}  // namespace rangesim
