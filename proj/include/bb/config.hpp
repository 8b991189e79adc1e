// JSON experiment configuration.
//
//   {
//     "k": 10,                      optional, default 10
//     "cost_interval": [1, 10],     optional, default [1, 10]
//     "mean_interval": [10, 20],    optional, default [10, 20]
//     "budgets": [1000, 10000],     required, strictly ascending
//     "trials": 100,                optional, default 100
//     "policies": ["kube", "fkube", "efirst:0.1"],   required
//     "master_seed": 1,             optional, default 1
//     "baseline": "exact"           optional: exact | fractional | auto
//   }
//
// Unknown keys are rejected. Overrides of the form key=value are applied to the
// parsed document before it is type-checked; the value is read as JSON and
// falls back to a plain string (so baseline=fractional works unquoted).

#ifndef BB_CONFIG_HPP
#define BB_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bb/experiment.hpp"

namespace bb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline const std::set<std::string, std::less<>>& config_keys() {
  static const std::set<std::string, std::less<>> keys{
      "k", "cost_interval", "mean_interval", "budgets", "trials", "policies", "master_seed",
      "baseline"};
  return keys;
}

[[noreturn]] inline void type_error(std::string_view key, std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(expected));
}

inline std::int64_t get_int(const json& v, std::string_view key, std::string_view expected) {
  if (!v.is_number_integer()) type_error(key, expected);
  return v.get<std::int64_t>();
}

inline double get_real(const json& v, std::string_view key, std::string_view expected) {
  if (!v.is_number()) type_error(key, expected);
  return v.get<double>();
}

inline json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

}  // namespace detail

/// Applies `key=value` overrides to a raw config document.
inline void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override '" + o + "': expected key=value");
    const std::string key = o.substr(0, eq);
    if (!detail::config_keys().contains(key))
      throw ConfigError("override '" + o + "': unknown config key '" + key + "'");
    doc[key] = detail::parse_override_value(o.substr(eq + 1));
  }
}

inline ExperimentConfig config_from_json(const nlohmann::json& doc) {
  using detail::get_int;
  using detail::get_real;
  using detail::type_error;

  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!detail::config_keys().contains(key)) throw ConfigError("config: unknown key '" + key + "'");

  ExperimentConfig cfg;
  if (doc.contains("k")) {
    cfg.k = get_int(doc["k"], "k", "integer >= 2");
    if (cfg.k < 2) type_error("k", "integer >= 2");
  }
  if (doc.contains("cost_interval")) {
    const auto& v = doc["cost_interval"];
    constexpr std::string_view want = "array [lo, hi] of integers with 1 <= lo <= hi";
    if (!v.is_array() || v.size() != 2) type_error("cost_interval", want);
    cfg.cost_interval = {get_int(v[0], "cost_interval", want), get_int(v[1], "cost_interval", want)};
    if (cfg.cost_interval.lo > cfg.cost_interval.hi)
      throw ConfigError("config key 'cost_interval': interval [" +
                        std::to_string(cfg.cost_interval.lo) + ", " +
                        std::to_string(cfg.cost_interval.hi) + "] is inverted (lo > hi)");
    if (cfg.cost_interval.lo < 1) type_error("cost_interval", want);
  }
  if (doc.contains("mean_interval")) {
    const auto& v = doc["mean_interval"];
    constexpr std::string_view want = "array [lo, hi] of numbers with 0 < lo <= hi";
    if (!v.is_array() || v.size() != 2) type_error("mean_interval", want);
    cfg.mean_interval = {get_real(v[0], "mean_interval", want), get_real(v[1], "mean_interval", want)};
    if (cfg.mean_interval.lo > cfg.mean_interval.hi)
      throw ConfigError("config key 'mean_interval': interval is inverted (lo > hi)");
    if (!(cfg.mean_interval.lo > 0.0)) type_error("mean_interval", want);
  }
  {
    constexpr std::string_view want = "non-empty, strictly ascending array of positive integers";
    if (!doc.contains("budgets")) throw ConfigError("config: missing required key 'budgets'");
    const auto& v = doc["budgets"];
    if (!v.is_array() || v.empty()) type_error("budgets", want);
    for (const auto& b : v) {
      const auto x = get_int(b, "budgets", want);
      if (x < 1 || (!cfg.budgets.empty() && x <= cfg.budgets.back())) type_error("budgets", want);
      cfg.budgets.push_back(x);
    }
  }
  if (doc.contains("trials")) {
    cfg.trials = get_int(doc["trials"], "trials", "integer >= 2");
    if (cfg.trials < 2) type_error("trials", "integer >= 2");
  }
  {
    constexpr std::string_view want = "non-empty array of policy ids (kube, fkube, efirst:<eps>)";
    if (!doc.contains("policies")) throw ConfigError("config: missing required key 'policies'");
    const auto& v = doc["policies"];
    if (!v.is_array() || v.empty()) type_error("policies", want);
    for (const auto& p : v) {
      if (!p.is_string()) type_error("policies", want);
      const auto id = p.get<std::string>();
      try {
        (void)make_policy(id);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("config key 'policies': " + std::string(e.what()));
      }
      cfg.policies.push_back(id);
    }
  }
  if (doc.contains("master_seed")) {
    const auto& v = doc["master_seed"];
    if (v.is_number_unsigned())
      cfg.master_seed = v.get<std::uint64_t>();
    else if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      cfg.master_seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
    else
      type_error("master_seed", "non-negative integer");
  }
  if (doc.contains("baseline")) {
    const auto& v = doc["baseline"];
    constexpr std::string_view want = "one of \"exact\", \"fractional\", \"auto\"";
    if (!v.is_string()) type_error("baseline", want);
    const auto s = v.get<std::string>();
    if (s == "exact")
      cfg.baseline = Baseline::exact;
    else if (s == "fractional")
      cfg.baseline = Baseline::fractional;
    else if (s == "auto")
      cfg.baseline = Baseline::automatic;
    else
      type_error("baseline", want);
  }
  return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{
      {"k", cfg.k},
      {"cost_interval", {cfg.cost_interval.lo, cfg.cost_interval.hi}},
      {"mean_interval", {cfg.mean_interval.lo, cfg.mean_interval.hi}},
      {"budgets", cfg.budgets},
      {"trials", cfg.trials},
      {"policies", cfg.policies},
      {"master_seed", cfg.master_seed},
      {"baseline", to_string(cfg.baseline)},
  };
}

/// Parses a config document from text. `seed_override` replaces master_seed
/// before the `--set` overrides are applied.
inline ExperimentConfig parse_config_text(const std::string& text,
                                          const std::vector<std::string>& overrides = {},
                                          std::optional<std::uint64_t> seed_override = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (seed_override && doc.is_object()) doc["master_seed"] = *seed_override;
  apply_overrides(doc, overrides);
  return config_from_json(doc);
}

inline ExperimentConfig parse_config(const std::string& path,
                                     const std::vector<std::string>& overrides = {},
                                     std::optional<std::uint64_t> seed_override = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_config_text(text, overrides, seed_override);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace bb

#endif  // BB_CONFIG_HPP
