#pragma once
/**
 * @file experiments.hpp
 * @brief Parameter sweeps behind the CLI: aversion-level tables, the 2^3
 *        factorial design, terminal-wealth and trading-fraction curves, and
 *        the simulation validation report. Every dataset carries the fully
 *        resolved configuration in its header so output files are
 *        self-describing.
 */

#include <optional>
#include <string>
#include <vector>

#include "ambp/ambiguity.hpp"
#include "ambp/montecarlo.hpp"

namespace ambp {

extern const char* const kVersion;

/// Column-oriented dataset with config metadata; writable as CSV (12
/// significant digits) or JSON.
struct Dataset {
  std::string name;
  std::vector<std::pair<std::string, std::string>> meta;  ///< header block
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Dataset& d);
std::string to_json(const Dataset& d);
void write_dataset(const Dataset& d, const std::string& out_path,
                   const std::string& format);

/// Default aversion grids (relative levels for the power case, absolute for
/// the exponential case).
std::vector<double> default_raa_levels();
std::vector<double> default_aaa_levels();

/// One row per relative-ambiguity-aversion level: (raa, lambda, q*,
/// objective). Rows are solved level-parallel across `jobs` workers.
Dataset table_raa(const ProblemConfig& cfg, std::vector<double> raa_levels,
                  int jobs = 1);

/// Exponential-aggregator analogue: (gamma, q*, objective).
Dataset table_aaa(const ProblemConfig& cfg, std::vector<double> gamma_levels,
                  int jobs = 1);

/// Serial reference for the sweep engine (single worker, plain loop);
/// results must match table_raa/table_aaa bit for bit.
Dataset table_raa_serial(const ProblemConfig& cfg,
                         std::vector<double> raa_levels);

struct FactorialCell {
  double prior_high;  ///< A level
  double rra;         ///< B level
  double raa;         ///< C level
  double q_star;
};

struct FactorialResult {
  std::vector<FactorialCell> cells;  ///< standard run order, A fastest
  double effect_prior;               ///< main effects: difference of
  double effect_rra;                 ///< conditional means under +/-1 coding
  double effect_raa;
  // Interactions use the same convention; reported but convention-sensitive.
  double effect_prior_rra;
  double effect_prior_raa;
  double effect_rra_raa;
  double effect_three_way;
};

/// Full 2^3 design over prior optimism {0.5, 0.8}, relative risk aversion
/// {0.3, 0.5} and relative ambiguity aversion {0.01, 0.3}.
FactorialResult factorial(const ProblemConfig& cfg, int jobs = 1);
Dataset factorial_dataset(const ProblemConfig& cfg,
                          const FactorialResult& r);

/// Terminal wealth versus state-price density for one or more aversion
/// levels (empty level list = the config's own ambiguity spec). Columns:
/// xi, then one wealth column per level.
Dataset frontier_terminal(const ProblemConfig& cfg,
                          const std::vector<double>& levels,
                          const std::vector<double>& xi_grid, int jobs = 1);

/// Risky fraction versus current wealth at time t; the wealth axis is the
/// image of a y-grid through the wealth surface.
Dataset frontier_fraction(const ProblemConfig& cfg,
                          const std::vector<double>& levels, double t,
                          const std::vector<double>& y_grid, int jobs = 1);

/// Policy surface over a (t, y) grid: wealth level, gradient, fraction.
Dataset policy_surface(const ProblemConfig& cfg,
                       const std::vector<double>& t_grid,
                       const std::vector<double>& y_grid);

struct SimulationReport {
  MeanSE budget;        ///< E[xi_T W_T] vs initial wealth
  double wealth;
  bool budget_pass = false;
  SupermartingaleReport supermartingale;
  FilterConsistencyReport filter;
  bool filter_slope_pass = false;
  bool concentration_pass = false;
  bool all_pass = false;
};

/// Budget / supermartingale / filter-consistency validation for the solved
/// policy of `cfg`. Statistical checks use 3-standard-error bands.
SimulationReport run_simulation_report(const ProblemConfig& cfg, int n_paths,
                                       std::uint64_t seed, int jobs = 1,
                                       const std::string& path_dump = "");
Dataset simulation_dataset(const ProblemConfig& cfg,
                           const SimulationReport& rep);

}  // namespace ambp
