// rangesim command-line front end. Payload goes to stdout (or --out files),
// diagnostics to stderr. Exit codes: 0 ok, 1 domain failure, 2 usage, 3 internal.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rangesim/attack_graph.hpp"
#include "rangesim/export.hpp"
#include "rangesim/forge.hpp"
#include "rangesim/registry.hpp"
#include "rangesim/scenario.hpp"
#include "rangesim/simulation.hpp"

namespace {

using namespace rangesim;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  out << text;
  if (!out.flush()) throw FileError("cannot write " + path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

struct Options {
  std::vector<std::string> capability_files;

  std::string requirement, scenario, strategy, out, trace, dot, paths_file, report_file,
      strategy_out;
  std::uint64_t seed = 0;
  std::uint32_t max_iterations = 5;
  std::uint32_t rounds = 20;
  std::string attacker = "greedy_value";
  std::string defender = "static";
  std::vector<std::string> entries;
  std::string target;
  std::size_t k = kUnlimited;
  std::size_t max_len = 8;
  std::size_t n = 100;
  unsigned threads = 0;
  std::string cap_action;
  std::string cap_file;
};

CapabilityRegistry load_registry(const Options& o) {
  CapabilityRegistry registry = builtin_registry();
  for (const auto& file : o.capability_files) {
    for (const auto& cap : parse_capability_document(read_file(file))) {
      registry = register_capability(registry, cap);
    }
  }
  return registry;
}

TargetSelector parse_target(const std::string& text) {
  if (text.rfind("class:", 0) == 0) {
    auto cls = parse_node_class(text.substr(6));
    if (!cls) throw CLI::ValidationError("--target", "unknown node class in '" + text + "'");
    return TargetSelector::of_class(*cls);
  }
  if (text.rfind("node:", 0) == 0) return TargetSelector::node(text.substr(5));
  return TargetSelector::node(text);
}

SimulationConfig sim_config(const Options& o) {
  SimulationConfig c;
  c.seed = o.seed;
  c.max_rounds = o.rounds;
  auto a = parse_attacker_policy(o.attacker);
  if (!a) throw CLI::ValidationError("--attacker", "unknown attacker policy '" + o.attacker + "'");
  auto d = parse_defender_policy(o.defender);
  if (!d) throw CLI::ValidationError("--defender", "unknown defender policy '" + o.defender + "'");
  c.attacker_policy = *a;
  c.defender_policy = *d;
  return c;
}

DefenseStrategy load_strategy(const Options& o) {
  if (o.strategy.empty()) return {};
  return parse_strategy_document(read_file(o.strategy));
}

void print_findings(const ValidationReport& report) {
  for (const auto& f : report.errors) {
    std::cerr << "error: " << f.code << ": " << f.message << " (" << f.location << ")\n";
  }
  for (const auto& f : report.warnings) {
    std::cerr << "warning: " << f.code << ": " << f.message << " (" << f.location << ")\n";
  }
}

int cmd_generate(const Options& o) {
  const auto registry = load_registry(o);
  const auto req = parse_requirement(read_file(o.requirement));
  try {
    auto result = run_pipeline(req, registry, o.seed, o.max_iterations);
    emit(o.out, serialize_scenario(result.spec));
    if (!o.report_file.empty()) write_file(o.report_file, serialize_generation_report(result.report));
    if (!o.strategy_out.empty()) write_file(o.strategy_out, serialize_strategy(result.strategy));
    std::cerr << "generated in " << result.report.iterations_used << " iteration(s)\n";
    return kExitOk;
  } catch (const GenerationFailed& e) {
    if (!o.report_file.empty()) write_file(o.report_file, serialize_generation_report(e.report()));
    if (!e.report().per_iteration_reports.empty()) print_findings(e.report().per_iteration_reports.back());
    throw;
  }
}

int cmd_validate(const Options& o) {
  const auto registry = load_registry(o);
  const auto spec = parse_scenario(read_file(o.scenario));
  const auto report = validate_spec(spec, registry);
  std::cout << serialize_report(report);
  print_findings(report);
  return report.valid() ? kExitOk : kExitDomain;
}

int cmd_paths(const Options& o) {
  const auto registry = load_registry(o);
  const auto spec = parse_scenario(read_file(o.scenario));
  const auto topology = resolve_topology(spec, registry);
  PathQuery q;
  q.entries = o.entries.empty() ? entry_surface(topology, registry) : o.entries;
  q.target = parse_target(o.target);
  q.k = o.k;
  q.max_len = o.max_len;
  const auto paths = enumerate_attack_paths(topology, registry, q);
  emit(o.out, serialize_paths(paths));
  if (!o.dot.empty()) write_file(o.dot, export_dot(topology, paths));
  std::cerr << paths.size() << " path(s)\n";
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const auto registry = load_registry(o);
  const auto spec = parse_scenario(read_file(o.scenario));
  const auto result = run_simulation(spec, load_strategy(o), registry, sim_config(o));
  emit(o.out, serialize_metrics(result.metrics));
  if (!o.trace.empty()) write_file(o.trace, export_trace(result.trace));
  return kExitOk;
}

int cmd_batch(const Options& o) {
  const auto registry = load_registry(o);
  const auto spec = parse_scenario(read_file(o.scenario));
  const auto batch = batch_run(spec, load_strategy(o), registry, sim_config(o), o.n, o.threads);
  emit(o.out, serialize_batch(batch));
  return kExitOk;
}

int cmd_capabilities(const Options& o) {
  CapabilityRegistry registry = load_registry(o);
  if (o.cap_action == "load") {
    if (o.cap_file.empty()) throw CLI::RequiredError("capabilities load FILE");
    const auto caps = parse_capability_document(read_file(o.cap_file));
    for (const auto& cap : caps) registry = register_capability(registry, cap);
    std::cerr << "loaded " << caps.size() << " capability(ies)\n";
  } else if (o.cap_action != "list") {
    throw CLI::ValidationError("capabilities", "expected 'list' or 'load FILE'");
  }
  for (const auto& [id, cap] : registry) {
    std::cout << id << '\t' << to_string(cap.kind) << '\t' << cap.technique_tag << '\t'
              << cap.cost_units << '\n';
  }
  return kExitOk;
}

int cmd_export_dot(const Options& o) {
  const auto registry = load_registry(o);
  const auto spec = parse_scenario(read_file(o.scenario));
  const auto topology = resolve_topology(spec, registry);
  std::optional<std::vector<AttackPath>> paths;
  if (!o.paths_file.empty()) paths = parse_paths_document(read_file(o.paths_file));
  emit(o.out, export_dot(topology, paths));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rangesim: scenario generation, attack paths and attack/defense simulation"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--capabilities", o.capability_files, "Extra capability definition files")
      ->check(CLI::ExistingFile);

  auto* generate = app.add_subcommand("generate", "Generate a scenario from a requirement");
  generate->add_option("--requirement", o.requirement)->required();
  generate->add_option("--seed", o.seed);
  generate->add_option("--max-iterations", o.max_iterations)->check(CLI::PositiveNumber);
  generate->add_option("--out", o.out, "Scenario output file (default stdout)");
  generate->add_option("--report", o.report_file, "GenerationReport output file");
  generate->add_option("--strategy-out", o.strategy_out, "Planned defense strategy output file");

  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("--scenario", o.scenario)->required();

  auto* paths = app.add_subcommand("paths", "Enumerate ranked attack paths");
  paths->add_option("--scenario", o.scenario)->required();
  paths->add_option("--entry", o.entries, "Entry nodes (default: the entry surface)");
  paths->add_option("--target", o.target, "class:<cls>, node:<id> or <id>")->required();
  paths->add_option("-k", o.k)->check(CLI::PositiveNumber);
  paths->add_option("--max-len", o.max_len)->check(CLI::PositiveNumber);
  paths->add_option("--dot", o.dot, "Also write a DOT diagram with the paths highlighted");
  paths->add_option("--out", o.out);

  auto add_sim_flags = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario)->required();
    cmd->add_option("--strategy", o.strategy, "Defense strategy file (default: none)");
    cmd->add_option("--seed", o.seed);
    cmd->add_option("--rounds", o.rounds)->check(CLI::PositiveNumber);
    cmd->add_option("--attacker", o.attacker, "greedy_value | cheapest_step | uniform_random");
    cmd->add_option("--defender", o.defender, "static | reactive");
    cmd->add_option("--out", o.out);
  };
  auto* simulate = app.add_subcommand("simulate", "Run one seeded simulation");
  add_sim_flags(simulate);
  simulate->add_option("--trace", o.trace, "Trace output file");

  auto* batch = app.add_subcommand("batch", "Run n seeded simulations and aggregate");
  add_sim_flags(batch);
  batch->add_option("-n", o.n)->check(CLI::PositiveNumber);
  batch->add_option("--threads", o.threads);

  auto* caps = app.add_subcommand("capabilities", "List or load atomic capabilities");
  caps->add_option("action", o.cap_action, "list | load")->required();
  caps->add_option("file", o.cap_file);

  auto* export_dot_cmd = app.add_subcommand("export-dot", "Render the topology as DOT");
  export_dot_cmd->add_option("--scenario", o.scenario)->required();
  export_dot_cmd->add_option("--paths", o.paths_file, "Paths document to highlight");
  export_dot_cmd->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, std::cout, std::cerr);
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(o);
    if (*validate) return cmd_validate(o);
    if (*paths) return cmd_paths(o);
    if (*simulate) return cmd_simulate(o);
    if (*batch) return cmd_batch(o);
    if (*caps) return cmd_capabilities(o);
    if (*export_dot_cmd) return cmd_export_dot(o);
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitDomain;
  } catch (const FileError& e) {
    std::cerr << "IoError: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (...) {
    std::cerr << "internal error\n";
    return kExitInternal;
  }
}
