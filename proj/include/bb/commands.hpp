// Implementations of the bbandit subcommands. Each returns a process exit
// code; tabular output goes to `out`, diagnostics to `err`.

#ifndef BB_COMMANDS_HPP
#define BB_COMMANDS_HPP

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bb/bandit.hpp"
#include "bb/bound.hpp"
#include "bb/config.hpp"
#include "bb/experiment.hpp"
#include "bb/oracle_check.hpp"

namespace bb {

/// "out/res.csv" + "moderate" -> "out/res-moderate.csv".
inline std::string suffixed_path(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "-" + suffix;
  return path.substr(0, dot) + "-" + suffix + path.substr(dot);
}

inline void print_summary(std::ostream& out, const std::vector<AggregateRow>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %10s %14s %12s %12s\n", "policy", "budget",
                "mean_regret", "ci95", "normalized");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-14s %10lld %14.6g %12.6g %12.6g\n", r.policy.c_str(),
                  static_cast<long long>(r.budget), r.mean_regret, r.regret_ci95,
                  r.normalized_regret);
    out << line;
  }
}

inline int cmd_run(const ExperimentConfig& cfg, const std::string& out_path, unsigned jobs,
                   std::ostream& out, std::ostream& err) {
  try {
    const ExperimentResult res = run_experiment(cfg, jobs);
    write_csv(res.rows, res.instance.min_cost(), out_path);
    print_summary(out, res.rows);
    err << "wrote " << out_path << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_sweep(const ExperimentConfig& base, const std::string& out_path, unsigned jobs,
                     std::ostream& out, std::ostream& err) {
  for (CostRegime regime : kAllRegimes) {
    ExperimentConfig cfg = base;
    cfg.cost_interval = cost_interval(regime);
    out << "== " << to_string(regime) << " costs [" << cfg.cost_interval.lo << ", "
        << cfg.cost_interval.hi << "]\n";
    if (int rc = cmd_run(cfg, suffixed_path(out_path, to_string(regime)), jobs, out, err); rc != 0)
      return rc;
  }
  return 0;
}

/// Theorem bounds (raw reward units) for both KUBE variants at every budget of
/// the config's instance, next to empirical regrets when a results CSV is given.
inline int cmd_bound(const ExperimentConfig& cfg, const std::optional<std::string>& csv_path,
                     std::ostream& out, std::ostream& err) {
  try {
    const BanditInstance inst = generate_instance(cfg);
    const InstanceStats st = instance_stats(inst);
    if (!(st.d_min > 0.0)) {
      err << "error: the best-density arm is not unique (d_min = 0); the regret bounds are "
             "undefined for this instance\n";
      return 1;
    }

    std::map<std::pair<std::string, std::int64_t>, double> empirical;
    if (csv_path) {
      for (const auto& r : read_csv(*csv_path).rows) empirical[{r.policy, r.budget}] = r.mean_regret;
    }
    auto cell = [&](const char* policy, std::int64_t b) -> std::string {
      auto it = empirical.find({policy, b});
      if (it == empirical.end()) return "-";
      return format_g6(it->second);
    };

    out << "# best_arm=" << st.best_density_arm << " d_min=" << format_g6(st.d_min)
        << " c_min=" << st.c_min << " c_max=" << st.c_max << " reward_cap=" << inst.reward_cap
        << '\n';
    char line[200];
    std::snprintf(line, sizeof line, "%10s %14s %14s %14s %14s\n", "budget", "bound_kube",
                  "bound_fkube", "regret_kube", "regret_fkube");
    out << line;
    bool ok = true;
    for (auto b : cfg.budgets) {
      const double kube = theorem_bound(st, b, BoundVariant::kube) * inst.reward_cap;
      const double fkube = theorem_bound(st, b, BoundVariant::fractional) * inst.reward_cap;
      const std::string ek = cell("kube", b);
      const std::string ef = cell("fkube", b);
      std::snprintf(line, sizeof line, "%10lld %14.6g %14.6g %14s %14s\n",
                    static_cast<long long>(b), kube, fkube, ek.c_str(), ef.c_str());
      out << line;
      auto above = [&](const char* policy, double bound) {
        auto it = empirical.find({policy, b});
        return it != empirical.end() && it->second > bound;
      };
      if (above("kube", kube) || above("fkube", fkube)) {
        err << "warning: empirical regret exceeds the bound at budget " << b << '\n';
        ok = false;
      }
    }
    return ok ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_oracle_check(std::int64_t n_instances, std::uint64_t seed, std::ostream& out,
                            std::ostream& err,
                            const GreedySolver& greedy = solve_density_greedy) {
  if (n_instances <= 0) {
    err << "warning: no instances requested, nothing checked\n";
    out << "PASS 0 instances\n";
    return 0;
  }
  const OracleReport r = run_oracle_check(n_instances, seed, greedy);
  if (!r.passed) {
    out << "FAIL after " << r.checked << " instances\n";
    err << "counterexample: " << r.counterexample << '\n';
    return 1;
  }
  out << "PASS " << r.checked << " instances\n";
  return 0;
}

}  // namespace bb

#endif  // BB_COMMANDS_HPP
