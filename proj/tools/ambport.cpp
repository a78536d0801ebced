// ambport: solver CLI for option-compensated portfolio choice under smooth
// ambiguity with drift learning. Subcommands reproduce the study's tables
// and figure datasets; `solve` prints a one-off summary.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration/usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "ambp/experiments.hpp"

namespace {

ambp::ProblemConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) {
    auto cfg = ambp::ProblemConfig::defaults();
    cfg.validate_or_throw();
    return cfg;
  }
  namespace fs = std::filesystem;
  fs::path p(config_path);
  if (!fs::exists(p) && p.is_relative()) {
    // AMBPORT_CONFIG_DIR seeds the search path for relative config names
    if (const char* dir = std::getenv("AMBPORT_CONFIG_DIR")) {
      fs::path alt = fs::path(dir) / p;
      if (fs::exists(alt)) p = alt;
    }
  }
  return ambp::load_config_file(p.string());
}

void print_summary(const ambp::ProblemConfig& cfg,
                   const ambp::SolutionSummary& s,
                   const std::string& out_path, const std::string& format) {
  ambp::Dataset d;
  d.name = "solution";
  d.meta.emplace_back("version", ambp::kVersion);
  for (const auto& [k, v] : ambp::config_entries(cfg)) d.meta.emplace_back(k, v);
  d.columns = {"q_star", "kappa_star", "concavification_point", "value",
               "objective", "fraction_at_origin"};
  d.rows.push_back({s.q_star, s.kappa_star, s.concavification_point, s.value,
                    s.objective,
                    s.fraction_at_origin ? *s.fraction_at_origin
                                         : std::numeric_limits<double>::quiet_NaN()});
  ambp::write_dataset(d, out_path, format);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambiguity-averse delegated-portfolio solver"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv";
  int jobs = 0;
  std::uint64_t seed = 12345;
  app.add_option("--config", config_path, "problem config file (INI)");
  app.add_option("--out", out_path, "output path ('-' or empty = stdout)");
  app.add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)");
  app.add_option("--seed", seed, "simulation seed");

  auto* cmd_solve = app.add_subcommand("solve", "solve one configuration");
  auto* cmd_raa = app.add_subcommand(
      "table-raa", "distorted prior across relative-ambiguity-aversion levels");
  std::vector<double> raa_list;
  cmd_raa->add_option("--raa", raa_list, "RAA levels (default: built-in list)");
  auto* cmd_aaa = app.add_subcommand(
      "table-aaa", "distorted prior across absolute-ambiguity-aversion levels");
  std::vector<double> aaa_list;
  cmd_aaa->add_option("--gamma", aaa_list, "AAA levels (default: built-in list)");
  auto* cmd_fact = app.add_subcommand(
      "factorial", "2^3 design over prior optimism, risk aversion, ambiguity aversion");
  auto* cmd_frontier = app.add_subcommand(
      "frontier", "terminal wealth and trading-fraction curve datasets");
  std::vector<double> frontier_levels;
  double frontier_t = -1.0;
  int frontier_points = 201;
  double frontier_xi_max = 0.0;
  std::string frontier_kind = "terminal";
  cmd_frontier->add_option("--kind", frontier_kind, "terminal|fraction")
      ->check(CLI::IsMember({"terminal", "fraction"}));
  cmd_frontier->add_option("--levels", frontier_levels,
                           "aversion levels, one curve each");
  cmd_frontier->add_option("--t", frontier_t,
                           "evaluation time for fraction curves (default T-1)");
  cmd_frontier->add_option("--points", frontier_points, "grid points");
  cmd_frontier->add_option("--xi-max", frontier_xi_max,
                           "upper end of the xi grid (default 2x cutoff)");
  auto* cmd_policy = app.add_subcommand(
      "policy", "wealth/gradient/fraction surface over a (t, y) grid");
  auto* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo validation of the solved policy");
  int sim_paths = 100000;
  std::string sim_dump;
  cmd_sim->add_option("--paths", sim_paths, "number of paths / terminal draws")
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--dump-paths", sim_dump,
                      "write simulated paths to this CSV file");

  CLI11_PARSE(app, argc, argv);

  try {
    ambp::ProblemConfig cfg = load_or_default(config_path);

    if (cmd_solve->parsed()) {
      auto s = ambp::solve_summary(cfg, jobs);
      print_summary(cfg, s, out_path, format);
    } else if (cmd_raa->parsed()) {
      auto d = ambp::table_raa(cfg, raa_list, jobs);
      ambp::write_dataset(d, out_path, format);
    } else if (cmd_aaa->parsed()) {
      auto d = ambp::table_aaa(cfg, aaa_list, jobs);
      ambp::write_dataset(d, out_path, format);
    } else if (cmd_fact->parsed()) {
      auto r = ambp::factorial(cfg, jobs);
      ambp::write_dataset(ambp::factorial_dataset(cfg, r), out_path, format);
    } else if (cmd_frontier->parsed()) {
      if (frontier_kind == "terminal") {
        double xi_max = frontier_xi_max;
        if (xi_max <= 0.0) {
          auto s = ambp::solve_summary(cfg, jobs);
          xi_max = 2.0 * s.concavification_point / s.kappa_star;
        }
        auto grid = linspace(xi_max / frontier_points, xi_max, frontier_points);
        auto d = ambp::frontier_terminal(cfg, frontier_levels, grid, jobs);
        ambp::write_dataset(d, out_path, format);
      } else {
        double t = frontier_t >= 0.0 ? frontier_t : cfg.market.horizon - 1.0;
        double span = 3.0 * std::sqrt(cfg.market.horizon);
        auto d = ambp::frontier_fraction(cfg, frontier_levels, t,
                                         linspace(-span, span, frontier_points),
                                         jobs);
        ambp::write_dataset(d, out_path, format);
      }
    } else if (cmd_policy->parsed()) {
      double T = cfg.market.horizon;
      auto d = ambp::policy_surface(cfg, linspace(0.0, 0.99 * T, 12),
                                    linspace(-3.0 * std::sqrt(T),
                                             3.0 * std::sqrt(T), 61));
      ambp::write_dataset(d, out_path, format);
    } else if (cmd_sim->parsed()) {
      auto rep = ambp::run_simulation_report(cfg, sim_paths, seed, jobs, sim_dump);
      ambp::write_dataset(ambp::simulation_dataset(cfg, rep), out_path, format);
      if (!rep.all_pass) {
        std::fprintf(stderr, "simulation validation: FAIL\n");
        return 1;
      }
      std::fprintf(stderr, "simulation validation: PASS\n");
    }
  } catch (const ambp::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
