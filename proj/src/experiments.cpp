#include "ambp/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ambp {

const char* const kVersion = "0.1.0";

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> meta_block(
    const ProblemConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("version", kVersion);
  for (const auto& [k, v] : config_entries(cfg)) meta.emplace_back(k, v);
  return meta;
}

ProblemConfig with_lambda(ProblemConfig cfg, double lambda) {
  cfg.ambiguity = AmbiguitySpec::power(lambda);
  return cfg;
}

}  // namespace

std::string to_csv(const Dataset& d) {
  std::ostringstream os;
  for (const auto& [k, v] : d.meta) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < d.columns.size(); ++i) {
    if (i) os << ',';
    os << d.columns[i];
  }
  os << '\n';
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << fmt12(row[i]);
    }
    os << '\n';
  }
  return os.str();
}

std::string to_json(const Dataset& d) {
  nlohmann::json j;
  j["name"] = d.name;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : d.meta) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = d.columns;
  j["rows"] = d.rows;
  return j.dump(2) + "\n";
}

void write_dataset(const Dataset& d, const std::string& out_path,
                   const std::string& format) {
  std::string body = format == "json" ? to_json(d) : to_csv(d);
  if (out_path.empty() || out_path == "-") {
    std::fputs(body.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << body;
}

std::vector<double> default_raa_levels() {
  return {0.01, 0.02, 0.04, 0.1, 0.3, 0.7, 1.2, 1.7, 2.0, 2.2};
}

std::vector<double> default_aaa_levels() {
  return {0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 8.0, 12.0, 15.0};
}

namespace {

// level-parallel sweep: one worst-case solve per row
template <typename MakeSpec>
std::vector<WorstCaseResult> sweep(const ProblemConfig& cfg,
                                   const std::vector<double>& levels,
                                   MakeSpec make_spec, int jobs,
                                   bool parallel) {
  OuterProblem prob = OuterProblem::from_config(cfg);
  std::vector<WorstCaseResult> results(levels.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (parallel) \
    num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (std::size_t i = 0; i < levels.size(); ++i) {
    try {
      results[i] = worst_case_prior(prob, make_spec(levels[i]), 1);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace

Dataset table_raa(const ProblemConfig& cfg, std::vector<double> raa_levels,
                  int jobs) {
  if (raa_levels.empty()) raa_levels = default_raa_levels();
  auto results = sweep(
      cfg, raa_levels,
      [](double raa) { return AmbiguitySpec::power(1.0 - raa); }, jobs, true);
  Dataset d;
  d.name = "table_raa";
  d.meta = meta_block(cfg);
  d.columns = {"raa", "lambda", "q_star", "objective"};
  for (std::size_t i = 0; i < raa_levels.size(); ++i)
    d.rows.push_back({raa_levels[i], 1.0 - raa_levels[i], results[i].q_star,
                      results[i].objective});
  return d;
}

Dataset table_raa_serial(const ProblemConfig& cfg,
                         std::vector<double> raa_levels) {
  if (raa_levels.empty()) raa_levels = default_raa_levels();
  auto results = sweep(
      cfg, raa_levels,
      [](double raa) { return AmbiguitySpec::power(1.0 - raa); }, 1, false);
  Dataset d;
  d.name = "table_raa";
  d.meta = meta_block(cfg);
  d.columns = {"raa", "lambda", "q_star", "objective"};
  for (std::size_t i = 0; i < raa_levels.size(); ++i)
    d.rows.push_back({raa_levels[i], 1.0 - raa_levels[i], results[i].q_star,
                      results[i].objective});
  return d;
}

Dataset table_aaa(const ProblemConfig& cfg, std::vector<double> gamma_levels,
                  int jobs) {
  if (gamma_levels.empty()) gamma_levels = default_aaa_levels();
  auto results = sweep(
      cfg, gamma_levels,
      [](double g) { return AmbiguitySpec::exponential(g); }, jobs, true);
  Dataset d;
  d.name = "table_aaa";
  d.meta = meta_block(cfg);
  d.columns = {"gamma", "q_star", "objective"};
  for (std::size_t i = 0; i < gamma_levels.size(); ++i)
    d.rows.push_back({gamma_levels[i], results[i].q_star,
                      results[i].objective});
  return d;
}

FactorialResult factorial(const ProblemConfig& cfg, int jobs) {
  const double prior_levels[2] = {0.5, 0.8};
  const double rra_levels[2] = {0.3, 0.5};
  const double raa_levels[2] = {0.01, 0.3};

  // standard run order: A fastest, then B, then C
  struct CellSpec {
    int a, b, c;
  };
  std::vector<CellSpec> specs;
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) specs.push_back({a, b, c});

  std::vector<FactorialCell> cells(specs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) \
    num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      ProblemConfig c = cfg;
      c.prior = DiscretePrior::two_point(cfg.prior.drifts.front(),
                                         cfg.prior.drifts.back(),
                                         prior_levels[specs[i].a]);
      c.risk.alpha = 1.0 - rra_levels[specs[i].b];
      c.ambiguity = AmbiguitySpec::power(1.0 - raa_levels[specs[i].c]);
      OuterProblem prob = OuterProblem::from_config(c);
      auto wc = worst_case_prior(prob, c.ambiguity, 1);
      cells[i] = FactorialCell{prior_levels[specs[i].a], rra_levels[specs[i].b],
                               raa_levels[specs[i].c], wc.q_star};
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  auto effect = [&](auto level_of) {
    double hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
      (level_of(specs[i]) > 0 ? hi : lo) += cells[i].q_star / 4.0;
    return hi - lo;
  };
  FactorialResult r;
  r.cells = cells;
  r.effect_prior = effect([](const CellSpec& s) { return s.a; });
  r.effect_rra = effect([](const CellSpec& s) { return s.b; });
  r.effect_raa = effect([](const CellSpec& s) { return s.c; });
  auto pm = [](int v) { return v == 1 ? 1 : -1; };
  r.effect_prior_rra =
      effect([&](const CellSpec& s) { return pm(s.a) * pm(s.b) > 0 ? 1 : 0; });
  r.effect_prior_raa =
      effect([&](const CellSpec& s) { return pm(s.a) * pm(s.c) > 0 ? 1 : 0; });
  r.effect_rra_raa =
      effect([&](const CellSpec& s) { return pm(s.b) * pm(s.c) > 0 ? 1 : 0; });
  r.effect_three_way = effect(
      [&](const CellSpec& s) { return pm(s.a) * pm(s.b) * pm(s.c) > 0 ? 1 : 0; });
  return r;
}

Dataset factorial_dataset(const ProblemConfig& cfg, const FactorialResult& r) {
  Dataset d;
  d.name = "factorial";
  d.meta = meta_block(cfg);
  d.meta.emplace_back("effect.prior_optimism", fmt12(r.effect_prior));
  d.meta.emplace_back("effect.risk_aversion", fmt12(r.effect_rra));
  d.meta.emplace_back("effect.ambiguity_aversion", fmt12(r.effect_raa));
  d.meta.emplace_back("interaction.prior_x_rra(convention-sensitive)",
                      fmt12(r.effect_prior_rra));
  d.meta.emplace_back("interaction.prior_x_raa(convention-sensitive)",
                      fmt12(r.effect_prior_raa));
  d.meta.emplace_back("interaction.rra_x_raa(convention-sensitive)",
                      fmt12(r.effect_rra_raa));
  d.meta.emplace_back("interaction.three_way(convention-sensitive)",
                      fmt12(r.effect_three_way));
  d.columns = {"prior_high", "rra", "raa", "q_star"};
  for (const auto& c : r.cells)
    d.rows.push_back({c.prior_high, c.rra, c.raa, c.q_star});
  return d;
}

Dataset frontier_terminal(const ProblemConfig& cfg,
                          const std::vector<double>& levels,
                          const std::vector<double>& xi_grid, int jobs) {
  Dataset d;
  d.name = "frontier_terminal";
  d.meta = meta_block(cfg);
  d.columns = {"xi"};

  std::vector<ProblemConfig> configs;
  if (levels.empty()) {
    configs.push_back(cfg);
    d.columns.push_back("wealth");
  } else {
    for (double lv : levels) {
      if (cfg.ambiguity.kind == AmbiguityKind::exponential) {
        ProblemConfig c = cfg;
        c.ambiguity = AmbiguitySpec::exponential(lv);
        configs.push_back(c);
        d.columns.push_back("wealth_aaa_" + fmt12(lv));
      } else {
        configs.push_back(with_lambda(cfg, 1.0 - lv));
        d.columns.push_back("wealth_raa_" + fmt12(lv));
      }
    }
  }
  d.rows.resize(xi_grid.size());
  for (std::size_t i = 0; i < xi_grid.size(); ++i)
    d.rows[i].push_back(xi_grid[i]);

  for (auto& c : configs) {
    OuterProblem prob = OuterProblem::from_config(c);
    auto wc = worst_case_prior(prob, c.ambiguity, jobs);
    EnvelopeSolution env = make_envelope(prob);
    SolvedPolicy policy = solve_under_prior(prob, wc.prior_star, env);
    for (std::size_t i = 0; i < xi_grid.size(); ++i)
      d.rows[i].push_back(policy.terminal_wealth(xi_grid[i]));
  }
  return d;
}

Dataset frontier_fraction(const ProblemConfig& cfg,
                          const std::vector<double>& levels, double t,
                          const std::vector<double>& y_grid, int jobs) {
  Dataset d;
  d.name = "frontier_fraction";
  d.meta = meta_block(cfg);
  d.meta.emplace_back("t", fmt12(t));

  std::vector<ProblemConfig> configs;
  std::vector<std::string> tags;
  if (levels.empty()) {
    configs.push_back(cfg);
    tags.push_back("");
  } else {
    for (double lv : levels) {
      if (cfg.ambiguity.kind == AmbiguityKind::exponential) {
        ProblemConfig c = cfg;
        c.ambiguity = AmbiguitySpec::exponential(lv);
        configs.push_back(c);
        tags.push_back("_aaa_" + fmt12(lv));
      } else {
        configs.push_back(with_lambda(cfg, 1.0 - lv));
        tags.push_back("_raa_" + fmt12(lv));
      }
    }
  }
  d.columns = {};
  for (const auto& tag : tags) {
    d.columns.push_back("wealth" + tag);
    d.columns.push_back("fraction" + tag);
  }
  d.rows.assign(y_grid.size(), {});
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    OuterProblem prob = OuterProblem::from_config(configs[ci]);
    auto wc = worst_case_prior(prob, configs[ci].ambiguity, jobs);
    EnvelopeSolution env = make_envelope(prob);
    SolvedPolicy policy = solve_under_prior(prob, wc.prior_star, env);
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
      auto fr = policy.risky_fraction(t, y_grid[i]);
      if (fr) {
        d.rows[i].push_back(fr->wealth_level);
        d.rows[i].push_back(fr->ratio);
      } else {
        d.rows[i].push_back(0.0);
        d.rows[i].push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
  }
  return d;
}

Dataset policy_surface(const ProblemConfig& cfg,
                       const std::vector<double>& t_grid,
                       const std::vector<double>& y_grid) {
  OuterProblem prob = OuterProblem::from_config(cfg);
  auto wc = worst_case_prior(prob, cfg.ambiguity, 1);
  EnvelopeSolution env = make_envelope(prob);
  SolvedPolicy policy = solve_under_prior(prob, wc.prior_star, env);
  Dataset d;
  d.name = "policy_surface";
  d.meta = meta_block(cfg);
  d.columns = {"t", "y", "wealth", "grad", "fraction"};
  for (double t : t_grid) {
    for (double y : y_grid) {
      double s = cfg.market.horizon - t;
      double w = policy.wealth_surface(s, y);
      double g = s > 0.0 ? policy.grad_wealth_surface(s, y) : 0.0;
      auto fr = policy.risky_fraction(t, y);
      d.rows.push_back({t, y, w, g,
                        fr ? fr->ratio : std::numeric_limits<double>::quiet_NaN()});
    }
  }
  return d;
}

SimulationReport run_simulation_report(const ProblemConfig& cfg, int n_paths,
                                       std::uint64_t seed, int jobs,
                                       const std::string& path_dump) {
  OuterProblem prob = OuterProblem::from_config(cfg);
  auto wc = worst_case_prior(prob, cfg.ambiguity, jobs);
  EnvelopeSolution env = make_envelope(prob);
  SolvedPolicy policy = solve_under_prior(prob, wc.prior_star, env);

  SimulationReport rep;
  rep.wealth = cfg.wealth;
  rep.budget = budget_identity_mc(policy, n_paths, seed, jobs);
  rep.budget_pass = std::abs(rep.budget.mean - cfg.wealth) <= 3.0 * rep.budget.se;

  // path bundle at a smaller count: the SDE integration is for the
  // dynamic checks, not the budget estimate
  int bundle_paths = std::min(n_paths, 4000);
  PathBundle bundle = simulate(policy, bundle_paths, 500, seed,
                               SimMode::draw_from_prior, 0.0, jobs);
  const double T = cfg.market.horizon;
  rep.supermartingale = supermartingale_check(
      bundle, policy, {0.0, T / 4.0, T / 2.0, 3.0 * T / 4.0, T});
  rep.filter = filter_consistency(bundle, policy);
  rep.filter_slope_pass =
      std::abs(rep.filter.regression_slope - 1.0) <= 3.0 * rep.filter.slope_se;
  rep.concentration_pass = rep.filter.concentration_fraction > 0.9;
  rep.all_pass = rep.budget_pass && rep.supermartingale.flat_within_bands &&
                 rep.filter_slope_pass && rep.concentration_pass;
  if (!path_dump.empty()) dump_paths_csv(bundle, path_dump);
  return rep;
}

Dataset simulation_dataset(const ProblemConfig& cfg,
                           const SimulationReport& rep) {
  Dataset d;
  d.name = "simulation_report";
  d.meta = meta_block(cfg);
  d.meta.emplace_back("budget.mean", fmt12(rep.budget.mean));
  d.meta.emplace_back("budget.se", fmt12(rep.budget.se));
  d.meta.emplace_back("budget.target", fmt12(rep.wealth));
  d.meta.emplace_back("budget.pass", rep.budget_pass ? "true" : "false");
  d.meta.emplace_back("filter.slope", fmt12(rep.filter.regression_slope));
  d.meta.emplace_back("filter.slope_se", fmt12(rep.filter.slope_se));
  d.meta.emplace_back("filter.slope_pass",
                      rep.filter_slope_pass ? "true" : "false");
  d.meta.emplace_back("filter.concentration",
                      fmt12(rep.filter.concentration_fraction));
  d.meta.emplace_back("filter.concentration_pass",
                      rep.concentration_pass ? "true" : "false");
  d.meta.emplace_back("supermartingale.flat",
                      rep.supermartingale.flat_within_bands ? "true" : "false");
  d.meta.emplace_back("all_pass", rep.all_pass ? "true" : "false");
  d.columns = {"t", "discounted_value_mean", "discounted_value_se"};
  for (std::size_t i = 0; i < rep.supermartingale.checkpoint_times.size(); ++i)
    d.rows.push_back({rep.supermartingale.checkpoint_times[i],
                      rep.supermartingale.discounted_value[i].mean,
                      rep.supermartingale.discounted_value[i].se});
  return d;
}

}  // namespace ambp
