#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dnplab {

enum class Kind { check_operator, certify_barrier, simulate, elliptic, eigenvalue, experiment };

const char* to_string(Kind kind);
Kind kind_from_string(const std::string& name);

/// Unknown keys, wrong types and violated bounds in a scenario file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A validated scenario. `config` is the normalized tree with every default
/// materialized; it is what gets echoed into the output metadata.
struct Scenario {
  Kind kind = Kind::simulate;
  std::uint64_t seed = 0;
  std::string output;
  nlohmann::json config;

  [[nodiscard]] std::string to_yaml() const;
  bool operator==(const Scenario& other) const { return config == other.config; }
};

/// YAML (or JSON) text to a scenario.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);
/// Validates and normalizes a tree. Throws ConfigError naming every unknown
/// key, or the first field that violates its type or bound.
Scenario parse_scenario_tree(const nlohmann::json& tree);

/// YAML text to a JSON tree. Plain scalars become numbers, booleans or null
/// where they parse as such; `pi`, `pi/N`, `A*pi` and `A*pi/N` are numbers.
nlohmann::json yaml_to_json(const std::string& text);

/// Sets `path` (dotted) in the tree to the scalar parsed from `value`.
void set_path(nlohmann::json& tree, const std::string& path, const std::string& value);

}  // namespace dnplab
