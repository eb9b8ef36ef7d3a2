#include "dnplab/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dnp/error.hpp"
#include "dnp/operators.hpp"

namespace dnplab {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec == std::errc() && p == e) return v;
  static const std::regex pi_expr(R"(^\s*(?:([0-9.eE+-]+)\s*\*\s*)?pi(?:\s*/\s*([0-9.eE+-]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, pi_expr)) {
    double a = 1.0, d = 1.0;
    if (m[1].matched) {
      auto x = parse_number(m[1].str());
      if (!x) return std::nullopt;
      a = *x;
    }
    if (m[2].matched) {
      auto x = parse_number(m[2].str());
      if (!x || *x == 0.0) return std::nullopt;
      d = *x;
    }
    return a * kPi / d;
  }
  return std::nullopt;
}

json scalar_to_json(const std::string& s, bool quoted) {
  if (quoted) return s;
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "null" || s == "~" || s.empty()) return nullptr;
  long long iv = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), iv);
  if (ec == std::errc() && p == s.data() + s.size()) return iv;
  if (auto d = parse_number(s)) return *d;
  return s;
}

json node_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return scalar_to_json(node.Scalar(), node.Tag() == "!");
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& x : node) a.push_back(node_to_json(x));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        if (o.contains(key)) throw ConfigError("duplicate key '" + key + "'");
        o[key] = node_to_json(kv.second);
      }
      return o;
    }
  }
  return nullptr;
}

void emit(YAML::Emitter& out, const json& j) {
  if (j.is_object()) {
    out << YAML::BeginMap;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out << YAML::Key << it.key() << YAML::Value;
      emit(out, it.value());
    }
    out << YAML::EndMap;
  } else if (j.is_array()) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& x : j) emit(out, x);
    out << YAML::EndSeq;
  } else if (j.is_string()) {
    out << YAML::DoubleQuoted << j.get<std::string>();
  } else if (j.is_boolean()) {
    out << (j.get<bool>() ? "true" : "false");
  } else if (j.is_null()) {
    out << YAML::Null;
  } else if (j.is_number_integer() || j.is_number_unsigned()) {
    out << j.get<long long>();
  } else {
    char buf[32];
    const double v = j.get<double>();
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    out << s;
  }
}

// --- schema ---------------------------------------------------------------

// Merges `user` onto `defaults`. The defaults' value types decide what is
// accepted: float (any number), integer (integral numbers), bool, string,
// arrays (of numbers), null (optional number or array) and objects (recursed).
void merge(const json& user, json& defaults, const std::string& path, std::vector<std::string>& unknown) {
  if (!user.is_object()) throw ConfigError("'" + (path.empty() ? std::string("<root>") : path) + "' must be a mapping");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!defaults.contains(it.key())) {
      unknown.push_back(key);
      continue;
    }
    json& d = defaults[it.key()];
    const json& v = it.value();
    auto type_error = [&](const char* want) {
      throw ConfigError("'" + key + "' must be " + want + " (got " + v.dump() + ")");
    };
    if (d.is_object()) {
      merge(v, d, key, unknown);
    } else if (d.is_number_float()) {
      if (!v.is_number()) type_error("a number");
      d = v.get<double>();
    } else if (d.is_number_integer() || d.is_number_unsigned()) {
      if (v.is_number_integer() || v.is_number_unsigned()) {
        d = v.get<long long>();
      } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>() &&
                 std::abs(v.get<double>()) < 9e15) {
        d = static_cast<long long>(v.get<double>());
      } else {
        type_error("an integer");
      }
    } else if (d.is_boolean()) {
      if (!v.is_boolean()) type_error("true or false");
      d = v;
    } else if (d.is_string()) {
      if (!v.is_string()) type_error("a string");
      d = v;
    } else if (d.is_array() || d.is_null()) {
      if (v.is_null() && d.is_null()) continue;
      if (v.is_number() && d.is_null()) {
        d = v.get<double>();
        continue;
      }
      if (!v.is_array()) type_error(d.is_null() ? "a number or a list of numbers" : "a list of numbers");
      json a = json::array();
      for (const auto& x : v) {
        if (!x.is_number()) type_error("a list of numbers");
        a.push_back(x.get<double>());
      }
      d = a;
    }
  }
}

std::string get_string(const json& tree, const std::string& key, const std::string& fallback) {
  if (!tree.is_object() || !tree.contains(key)) return fallback;
  if (!tree[key].is_string()) throw ConfigError("'" + key + "' must be a string");
  return tree[key].get<std::string>();
}

json sub(const json& tree, const std::string& key) {
  if (!tree.is_object() || !tree.contains(key)) return json::object();
  if (!tree[key].is_object()) throw ConfigError("'" + key + "' must be a mapping");
  return tree[key];
}

json operator_defaults(const std::string& family) {
  json d{{"family", family}};
  if (family == "p_laplacian" || family == "pseudo_p_laplacian") d["p"] = nullptr;
  if (family == "pucci_max" || family == "pucci_min") {
    d["lo"] = 1.0;
    d["hi"] = 1.0;
  }
  d["lambda1"] = nullptr;
  return d;
}

json domain_defaults(const std::string& shape, const json& fallback) {
  if (fallback.is_object() && get_string(fallback, "shape", "") == shape) return fallback;
  const double h = fallback.contains("h") ? fallback["h"].get<double>() : kPi / 128.0;
  if (shape == "interval") return {{"shape", "interval"}, {"lower", 0.0}, {"upper", kPi}, {"h", h}};
  if (shape == "box") return {{"shape", "box"}, {"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}, {"h", h}};
  if (shape == "ball") return {{"shape", "ball"}, {"center", {0.0, 0.0}}, {"radius", 1.0}, {"h", h}};
  throw ConfigError("domain.shape must be interval, box or ball (got '" + shape + "')");
}

json initial_defaults(const std::string& kind) {
  if (kind == "sine") return {{"kind", "sine"}, {"base", 1.0}, {"amplitude", 1.0}};
  if (kind == "bump")
    return {{"kind", "bump"}, {"base", 1.0}, {"amplitude", 1.0}, {"center", nullptr}, {"radius", nullptr}};
  if (kind == "constant") return {{"kind", "constant"}, {"value", 1.0}};
  throw ConfigError("initial.kind must be sine, bump or constant (got '" + kind + "')");
}

json boundary_defaults(const std::string& kind, double nu) {
  if (kind == "constant") return {{"kind", "constant"}, {"nu", nu}};
  if (kind == "decaying") return {{"kind", "decaying"}, {"nu", nu}, {"amplitude", 1.0}, {"rate", 1.0}};
  throw ConfigError("boundary.kind must be constant or decaying (got '" + kind + "')");
}

// Fills the data sections (initial, boundary) of a section template from the user's choice of kinds.
void data_sections(const json& user, json& d, const std::string& initial_kind, double nu) {
  if (d.contains("initial")) d["initial"] = initial_defaults(get_string(sub(user, "initial"), "kind", initial_kind));
  if (d.contains("boundary")) d["boundary"] = boundary_defaults(get_string(sub(user, "boundary"), "kind", "constant"), nu);
}

json barrier_defaults(const std::string& kind) {
  if (kind == "hopf_shell") return {{"kind", kind}, {"center", {0.0}}, {"tau", 1.0}, {"rho", 0.5}, {"a", 0.0}};
  if (kind == "slanted_cylinder")
    return {{"kind", kind}, {"p", {0.0}}, {"tau", 0.0}, {"q", nullptr}, {"s", 1.0},
            {"rho", 0.3},   {"level", 1.0}, {"amplitude", 1.0}};
  if (kind == "counterexample_k_gt_1") return {{"kind", kind}, {"dim", 1}, {"m", 1.0}, {"T", 1.0}, {"R", 1.0}};
  if (kind == "cylinder_min")
    return {{"kind", kind}, {"p", {0.0}}, {"tau", 0.0}, {"T", 1.0}, {"rho", 0.5}, {"m", 1.0}, {"eps", 0.0}};
  if (kind == "exp_growth_sub")
    return {{"kind", kind}, {"z", nullptr}, {"m0", 0.5}, {"target", 1.0}, {"a_fraction", 0.5}, {"T0", 0.0},
            {"t_end", 10.0}};
  if (kind == "exp_decay_super")
    return {{"kind", kind},     {"z", nullptr},     {"kappa", 0.5}, {"target", 1.0},
            {"M0", 2.0},        {"a_fraction", 0.5}, {"T0", 0.0},   {"t_end", 10.0}};
  if (kind == "power_decay_super" || kind == "power_decay_sub")
    return {{"kind", kind}, {"nu", 1.0}, {"eps", 0.1}, {"T_anchor", 0.0}, {"T0", 0.0}, {"t_end", 0.0}};
  if (kind == "eigen_exponential")
    return {{"kind", kind}, {"M", 1.0}, {"T0", 0.0}, {"t_end", 10.0}, {"lambda", 0.0}};
  if (kind == "perron_sub" || kind == "perron_super")
    return {{"kind", kind}, {"y", nullptr}, {"rho", 0.5}, {"theta", 0.0}, {"delta", 1.0}};
  throw ConfigError("unknown barrier.kind '" + kind + "'");
}

bool barrier_needs_domain(const std::string& kind) {
  return kind == "exp_growth_sub" || kind == "exp_decay_super" || kind == "power_decay_super" ||
         kind == "power_decay_sub" || kind == "eigen_exponential" || kind == "perron_sub" || kind == "perron_super";
}

struct ExperimentSchema {
  json section;
  bool uses_operator = true;
  bool uses_domain = true;
  std::string default_family = "laplacian";
  json default_operator_params = json::object();
  json domain = nullptr;
};

ExperimentSchema experiment_schema(const std::string& name, const json& user_section) {
  ExperimentSchema s;
  const json interval_pi{{"shape", "interval"}, {"lower", 0.0}, {"upper", kPi}, {"h", kPi / 128.0}};
  const json interval_unit{{"shape", "interval"}, {"lower", 0.0}, {"upper", 1.0}, {"h", 1.0 / 64.0}};
  if (name == "min-principle-k1") {
    s.section = {{"name", name},         {"m", 1.0},       {"amplitude", 1.0},     {"bump_center", nullptr},
                 {"bump_radius", nullptr}, {"T_end", 0.5},   {"times", nullptr},     {"scheme_tol", 1e-8},
                 {"barrier_check", true}};
    s.domain = interval_pi;
  } else if (name == "hopf-check") {
    s.section = {{"name", name}, {"m", 1.0},         {"amplitude", 1.0}, {"p", nullptr},    {"tau", 1.0},
                 {"gamma", nullptr}, {"gamma_t", 0.0}, {"rho", 1.0},     {"threshold", 0.1}};
    s.domain = interval_pi;
    s.domain["h"] = kPi / 256.0;
  } else if (name == "hopf-counterexample") {
    s.section = {{"name", name}, {"dim", 1}, {"m", 1.0}, {"T", 1.0}, {"R", 1.0}, {"tau", 0.5}, {"fail_threshold", 1e-3}};
    s.uses_domain = false;
    s.default_family = "p_laplacian";
    s.default_operator_params = {{"p", 3.0}};
  } else if (name == "k-gt-1-example") {
    s.section = {{"name", name},        {"dim", 1},           {"m", 1.0},           {"T", 1.0},
                 {"R", 1.0},            {"h_axis", 1.0 / 64.0}, {"n_slices", 9},      {"bump_center", nullptr},
                 {"bump_radius", nullptr}, {"amplitude", 1.0},   {"tau", 0.05},        {"T_cyl", 0.15},
                 {"rho", 0.2},          {"n_snapshots", 16},  {"scheme_tol", 1e-8}, {"control", true}};
    s.domain = interval_unit;
    s.domain["h"] = 1.0 / 128.0;
    s.default_family = "p_laplacian";
    s.default_operator_params = {{"p", 3.0}};
  } else if (name == "asymptotics") {
    s.section = {{"name", name}, {"initial", json::object()}, {"boundary", json::object()}, {"T_end", 20.0},
                 {"n_snapshots", 80}, {"tol", 1e-2},            {"envelopes", true}};
    data_sections(user_section, s.section, "sine", 1.0);
    s.domain = interval_unit;
  } else if (name == "decay-power") {
    s.section = {{"name", name},         {"initial", json::object()}, {"nu", 1.0},        {"t_first", 1.0},
                 {"t_last", 1000.0},     {"n_snapshots", 60},         {"tail_fraction", 0.5},
                 {"min_exponent", 0.9},  {"min_r2", 0.95}};
    data_sections(user_section, s.section, "bump", 1.0);
    if (get_string(sub(user_section, "initial"), "kind", "bump") == "bump") {
      s.section["initial"]["center"] = json::array({0.5});
      s.section["initial"]["radius"] = 0.3;
    }
    s.domain = interval_unit;
    s.default_family = "p_laplacian";
    s.default_operator_params = {{"p", 3.0}};
  } else if (name == "decay-exponential") {
    s.section = {{"name", name},          {"initial", json::object()}, {"t_last", 8.0},   {"n_snapshots", 40},
                 {"tail_fraction", 0.5},  {"min_r2", 0.95},            {"expected_rate", nullptr},
                 {"rate_tol", 0.05},      {"estimate", true},          {"estimate_slack", 0.05}};
    data_sections(user_section, s.section, "sine", 0.0);
    if (get_string(sub(user_section, "initial"), "kind", "sine") == "sine") s.section["initial"]["base"] = 0.0;
    s.domain = interval_pi;
  } else if (name == "comparison-suite") {
    s.section = {{"name", name}, {"n_pairs", 20}, {"tol", 1e-6}, {"h", 1.0 / 32.0}, {"n_snapshots", 33}};
    s.uses_domain = false;
    s.uses_operator = false;
  } else {
    throw ConfigError("unknown experiment.name '" + name +
                      "' (expected min-principle-k1, hopf-check, hopf-counterexample, k-gt-1-example, asymptotics, "
                      "decay-power, decay-exponential or comparison-suite)");
  }
  s.section["write_fields"] = false;
  return s;
}

void require_positive(const json& j, const std::string& key, const std::string& path) {
  if (!(j[key].get<double>() > 0.0)) throw ConfigError("'" + path + "." + key + "' must be > 0");
}

void validate_operator(json& op) {
  std::map<std::string, double> params;
  for (auto it = op.begin(); it != op.end(); ++it) {
    if (it.key() == "family" || it.value().is_null()) continue;
    if (!it.value().is_number()) throw ConfigError("'operator." + it.key() + "' must be a number");
    params[it.key()] = it.value().get<double>();
  }
  const std::string family = op["family"].get<std::string>();
  if (op.contains("p") && op["p"].is_null()) throw ConfigError("'operator.p' is required for " + family);
  try {
    const auto spec = dnp::OperatorSpec::from_name(family, params);
    op["lambda1"] = spec.lambda1;
  } catch (const dnp::Error& e) {
    throw ConfigError(std::string("operator: ") + e.what());
  }
}

void validate_domain(const json& d) {
  require_positive(d, "h", "domain");
  const std::string shape = d["shape"].get<std::string>();
  if (shape == "interval") {
    if (!d["lower"].is_number() || !d["upper"].is_number())
      throw ConfigError("'domain.lower' and 'domain.upper' must be numbers for an interval");
    if (!(d["upper"].get<double>() > d["lower"].get<double>())) throw ConfigError("'domain.upper' must exceed 'domain.lower'");
  } else if (shape == "box") {
    if (!d["lower"].is_array() || d["lower"].size() != d["upper"].size() || d["lower"].size() < 1 ||
        d["lower"].size() > 2)
      throw ConfigError("'domain.lower' and 'domain.upper' must be lists of equal length 1 or 2");
    for (std::size_t i = 0; i < d["lower"].size(); ++i)
      if (!(d["upper"][i].get<double>() > d["lower"][i].get<double>()))
        throw ConfigError("'domain.upper' must exceed 'domain.lower' componentwise");
  } else {
    if (!d["center"].is_array() || d["center"].empty() || d["center"].size() > 2)
      throw ConfigError("'domain.center' must be a list of length 1 or 2");
    require_positive(d, "radius", "domain");
  }
}

}  // namespace

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::check_operator: return "check-operator";
    case Kind::certify_barrier: return "certify-barrier";
    case Kind::simulate: return "simulate";
    case Kind::elliptic: return "elliptic";
    case Kind::eigenvalue: return "eigenvalue";
    case Kind::experiment: return "experiment";
  }
  return "unknown";
}

Kind kind_from_string(const std::string& name) {
  for (Kind k : {Kind::check_operator, Kind::certify_barrier, Kind::simulate, Kind::elliptic, Kind::eigenvalue,
                 Kind::experiment})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown kind '" + name +
                    "' (expected check-operator, certify-barrier, simulate, elliptic, eigenvalue or experiment)");
}

json yaml_to_json(const std::string& text) {
  try {
    return node_to_json(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

void set_path(json& tree, const std::string& path, const std::string& value) {
  if (!tree.is_object()) tree = json::object();
  json* node = &tree;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    json& next = (*node)[parts[i]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("'" + parts[i] + "' is not a section");
    node = &next;
  }
  (*node)[parts.back()] = yaml_to_json(value);
}

Scenario parse_scenario_tree(const json& tree) {
  if (!tree.is_object()) throw ConfigError("a scenario must be a mapping");
  if (!tree.contains("kind")) throw ConfigError("'kind' is required");
  const Kind kind = kind_from_string(get_string(tree, "kind", ""));

  json d{{"kind", to_string(kind)}, {"seed", 0}, {"output", ""}};
  std::string family = "laplacian";
  json op_params = json::object();
  json domain_fallback{{"shape", "interval"}, {"lower", 0.0}, {"upper", kPi}, {"h", kPi / 128.0}};
  bool uses_operator = true, uses_domain = true;

  switch (kind) {
    case Kind::check_operator:
      uses_domain = false;
      d["check"] = {{"n", 2}, {"lambda_min", 0.0}, {"lambda_max", 4.0}, {"n_grid", 41}, {"n_samples", 2000},
                    {"n_directions", 0}};
      break;
    case Kind::certify_barrier: {
      const std::string bk = get_string(sub(tree, "barrier"), "kind", "hopf_shell");
      d["barrier"] = barrier_defaults(bk);
      d["certify"] = {{"per_axis", 64}, {"n_quasi", 4096}, {"derivative_points", 1000}};
      uses_domain = barrier_needs_domain(bk);
      if (bk == "counterexample_k_gt_1" || bk == "cylinder_min" || bk == "power_decay_super" || bk == "power_decay_sub") {
        family = "p_laplacian";
        op_params = {{"p", 3.0}};
      }
      break;
    }
    case Kind::simulate:
      d["simulate"] = {{"T_end", 1.0},       {"n_snapshots", 10},  {"times", nullptr},    {"initial", json::object()},
                       {"boundary", json::object()}, {"mode", "direct"}, {"safety", 0.8}, {"eigen_decay", false},
                       {"max_steps", 200000000},     {"write_fields", true}};
      data_sections(sub(tree, "simulate"), d["simulate"], "sine", 1.0);
      break;
    case Kind::elliptic:
      d["elliptic"] = {{"delta", 1.0},   {"theta", 0.0},        {"tol", 1e-8},       {"max_iterations", 5000000},
                       {"safety", 0.8},  {"perron_points", 8},  {"perron_tol", 5e-3}, {"write_fields", true}};
      break;
    case Kind::eigenvalue:
      d["eigenvalue"] = {{"delta", 1.0}, {"lambda_max", 10.0}, {"bracket_fraction", 0.02}, {"max_steps", 1000000},
                         {"safety", 0.8}};
      break;
    case Kind::experiment: {
      const json user = sub(tree, "experiment");
      if (!user.contains("name")) throw ConfigError("'experiment.name' is required");
      auto schema = experiment_schema(get_string(user, "name", ""), user);
      d["experiment"] = schema.section;
      uses_operator = schema.uses_operator;
      uses_domain = schema.uses_domain;
      family = schema.default_family;
      op_params = schema.default_operator_params;
      if (schema.domain.is_object()) domain_fallback = schema.domain;
      break;
    }
  }
  if (uses_operator) {
    const std::string fam = get_string(sub(tree, "operator"), "family", family);
    d["operator"] = operator_defaults(fam);
    if (fam == family)
      for (auto it = op_params.begin(); it != op_params.end(); ++it) d["operator"][it.key()] = it.value();
  }
  if (uses_domain) d["domain"] = domain_defaults(get_string(sub(tree, "domain"), "shape", domain_fallback["shape"]), domain_fallback);

  std::vector<std::string> unknown;
  merge(tree, d, "", unknown);
  if (!unknown.empty()) {
    std::string msg = "unknown key";
    msg += unknown.size() > 1 ? "s: " : ": ";
    for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", '" : "'") + unknown[i] + "'";
    throw ConfigError(msg);
  }
  if (d["seed"].get<long long>() < 0) throw ConfigError("'seed' must be >= 0");
  if (uses_operator) validate_operator(d["operator"]);
  if (uses_domain) validate_domain(d["domain"]);

  if (kind == Kind::simulate) {
    const auto& s = d["simulate"];
    if (!(s["T_end"].get<double>() >= 0.0)) throw ConfigError("'simulate.T_end' must be >= 0");
    if (s["n_snapshots"].get<long long>() < 1) throw ConfigError("'simulate.n_snapshots' must be >= 1");
    if (!(s["safety"].get<double>() > 0.0 && s["safety"].get<double>() <= 1.0))
      throw ConfigError("'simulate.safety' must be in (0, 1]");
    const std::string mode = s["mode"].get<std::string>();
    if (mode != "direct" && mode != "log_variable") throw ConfigError("'simulate.mode' must be direct or log_variable");
  }
  if (kind == Kind::check_operator) {
    const long long n = d["check"]["n"].get<long long>();
    if (n < 1 || n > 3) throw ConfigError("'check.n' must be in 1..3");
  }
  Scenario sc;
  sc.kind = kind;
  sc.seed = static_cast<std::uint64_t>(d["seed"].get<long long>());
  sc.output = d["output"].get<std::string>();
  sc.config = std::move(d);
  return sc;
}

Scenario parse_scenario_text(const std::string& text) { return parse_scenario_tree(yaml_to_json(text)); }

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

std::string Scenario::to_yaml() const {
  YAML::Emitter out;
  emit(out, config);
  return std::string(out.c_str()) + "\n";
}

}  // namespace dnplab
