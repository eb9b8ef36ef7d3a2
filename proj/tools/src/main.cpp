#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnplab/runner.hpp"
#include "dnplab/scenario.hpp"

namespace {

using nlohmann::json;

const std::set<std::string> kOperatorKeys{"family", "p", "lo", "hi", "lambda1"};
const std::set<std::string> kDomainKeys{"shape", "h", "lower", "upper", "center", "radius"};

std::string section_for(dnplab::Kind kind) {
  switch (kind) {
    case dnplab::Kind::check_operator: return "check";
    case dnplab::Kind::certify_barrier: return "barrier";
    case dnplab::Kind::simulate: return "simulate";
    case dnplab::Kind::elliptic: return "elliptic";
    case dnplab::Kind::eigenvalue: return "eigenvalue";
    case dnplab::Kind::experiment: return "experiment";
  }
  return "";
}

/// Builds a tree from `<kind> [name] key=value...`. Dotted keys are taken
/// as paths; bare keys go to the operator, the domain or the kind's section.
json tree_from_args(dnplab::Kind kind, const std::vector<std::string>& args) {
  json tree{{"kind", dnplab::to_string(kind)}};
  const std::string section = section_for(kind);
  bool named = false;
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      if (named) throw dnplab::ConfigError("unexpected argument '" + arg + "' (expected key=value)");
      named = true;
      if (kind == dnplab::Kind::experiment) {
        tree["experiment"]["name"] = arg;
      } else if (kind == dnplab::Kind::certify_barrier) {
        tree["barrier"]["kind"] = arg;
      } else {
        tree["operator"]["family"] = arg;
      }
      continue;
    }
    const std::string key = arg.substr(0, eq);
    const std::string value = arg.substr(eq + 1);
    if (key.empty()) throw dnplab::ConfigError("empty key in '" + arg + "'");
    std::string path = key;
    if (key.find('.') == std::string::npos && key != "seed" && key != "output") {
      if (kOperatorKeys.count(key)) {
        path = "operator." + key;
      } else if (kDomainKeys.count(key) && kind != dnplab::Kind::check_operator) {
        path = "domain." + key;
      } else {
        path = section + "." + key;
      }
    }
    dnplab::set_path(tree, path, value);
  }
  return tree;
}

int execute(dnplab::Scenario scenario, const std::string& out, bool has_seed, std::uint64_t seed, bool print_only) {
  if (has_seed) {
    scenario.config["seed"] = seed;
    scenario.seed = seed;
  }
  if (!out.empty()) scenario.config["output"] = out;
  std::string dir = scenario.config["output"].get<std::string>();
  if (dir.empty()) {
    dir = "dnplab-out";
    scenario.config["output"] = dir;
  }
  scenario.output = dir;
  if (print_only) {
    std::cout << scenario.to_yaml();
    return dnplab::kPass;
  }
  return dnplab::run_scenario(scenario, dir, std::cout).exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnplab: operator checks, barrier certification and parabolic experiments"};
  app.require_subcommand(1);

  std::string out;
  std::uint64_t seed = 0;
  bool print_config = false;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-o,--out", out, "Output directory (overrides the config)");
    cmd->add_option("-s,--seed", seed, "Random seed (overrides the config)");
    cmd->add_flag("--print-config", print_config, "Print the normalized scenario and exit");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("config", config_path, "Scenario file (YAML)")->required();
  add_common(run);

  std::vector<std::pair<dnplab::Kind, CLI::App*>> kinds;
  std::vector<std::string> args;
  for (auto kind : {dnplab::Kind::check_operator, dnplab::Kind::certify_barrier, dnplab::Kind::simulate,
                    dnplab::Kind::elliptic, dnplab::Kind::eigenvalue, dnplab::Kind::experiment}) {
    auto* cmd = app.add_subcommand(dnplab::to_string(kind), std::string("Run a ") + dnplab::to_string(kind) +
                                                                " scenario from key=value arguments");
    cmd->add_option("args", args, "[name] key=value ...");
    add_common(cmd);
    kinds.emplace_back(kind, cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dnplab::kConfigFailure;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      const bool has_seed = sub->count("--seed") > 0;
      if (sub == run)
        return execute(dnplab::parse_scenario_file(config_path), out, has_seed, seed, print_config);
      for (const auto& [kind, cmd] : kinds)
        if (sub == cmd)
          return execute(dnplab::parse_scenario_tree(tree_from_args(kind, args)), out, has_seed, seed, print_config);
    }
  } catch (...) {
    std::string message;
    const int code = dnplab::exit_code_for_current_exception(&message);
    std::cerr << "error: " << message << "\n";
    return code;
  }
  return dnplab::kConfigFailure;
}
