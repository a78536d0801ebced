#pragma once
/**
 * @file montecarlo.hpp
 * @brief Euler-Maruyama simulation of the observation and wealth dynamics
 *        under a solved policy, plus the statistical validation reports
 *        (budget identity, supermartingale property, filter consistency).
 *
 * Paths are embarrassingly parallel: each owns an RNG stream derived from
 * (seed, path index), per-path results land in preallocated slots, and all
 * statistics are reduced serially afterwards, so a bundle is bit-identical
 * for any thread count. simulate_serial is the plain-loop reference the
 * OpenMP version is tested against.
 */

#include <cstdint>
#include <vector>

#include "ambp/policy.hpp"

namespace ambp {

enum class SimMode {
  fixed_drift,      ///< all paths share one true drift z
  draw_from_prior,  ///< each path draws z from the policy's prior
};

/// Precomputed (wealth, pi/W) surface on a geometric remaining-time grid
/// from s_min to T, bilinearly interpolated. The s_min floor doubles as the
/// near-maturity cutoff where the gradient's jump term blows up like
/// 1/sqrt(s).
class PolicyTable {
public:
  PolicyTable(const SolvedPolicy& policy, int n_slices, double y_lo,
              double y_hi, int n_y, double s_min = 1e-4);

  double wealth(double s, double y) const;
  double fraction(double s, double y) const;  ///< pi/W, zero-wealth-safe

private:
  double slice_s(int k) const;
  double interp_y(const std::vector<double>& row, double y) const;
  double lookup(const std::vector<std::vector<double>>& rows, double s,
                double y) const;
  int n_slices_;
  double s_min_, T_ = 0.0, log_ratio_ = 0.0;
  double y_lo_ = 0.0, dy_ = 0.0;
  int n_y_;
  std::vector<std::vector<double>> wealth_rows_;
  std::vector<std::vector<double>> ratio_rows_;
};

struct PathBundle {
  std::uint64_t seed = 0;
  int n_steps = 0;
  SimMode mode = SimMode::draw_from_prior;
  std::vector<double> times;          ///< grid 0..T, n_steps+1 points
  std::vector<double> drawn_drift;    ///< z per path
  // row-major [path][step] flattened, aligned with `times`
  std::vector<double> observation;    ///< Y_t
  std::vector<double> posterior_mean; ///< filtered theta estimate
  std::vector<double> wealth_sde;     ///< Euler integration of the wealth SDE
  std::vector<double> wealth_surface; ///< direct evaluation of the surface
  std::vector<double> position;       ///< dollar stock position pi_t
  int n_paths() const { return static_cast<int>(drawn_drift.size()); }
  double at(const std::vector<double>& a, int path, int step) const {
    return a[static_cast<std::size_t>(path) * (n_steps + 1) + step];
  }
};

/// Simulate n_paths over n_steps. Wealth is built two ways per path: (a)
/// Euler on dW = rW dt + pi sigma dY with the position frozen per step and
/// wealth absorbed at zero, and (b) the surface evaluated at (T-t, Y_t).
/// `z_fixed` is required in fixed_drift mode.
PathBundle simulate(const SolvedPolicy& policy, int n_paths, int n_steps,
                    std::uint64_t seed, SimMode mode, double z_fixed = 0.0,
                    int jobs = 0);

/// Plain serial loop, kept as the reference implementation for tests and
/// the benchmark baseline.
PathBundle simulate_serial(const SolvedPolicy& policy, int n_paths,
                           int n_steps, std::uint64_t seed, SimMode mode,
                           double z_fixed = 0.0);

/// Sample mean/standard error pair.
struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

/// E[xi_T W_T] estimated by exact terminal sampling (Y_T is Gaussian given
/// the drawn drift; no path discretization error). Used for the budget
/// identity check at large sample sizes.
MeanSE budget_identity_mc(const SolvedPolicy& policy, int n_draws,
                          std::uint64_t seed, int jobs = 0);

struct SupermartingaleReport {
  std::vector<double> checkpoint_times;
  std::vector<MeanSE> discounted_value;  ///< E[e^{-rt} W_t / F(t, Y_t)]
  bool non_increasing_within_bands = false;
  bool flat_within_bands = false;  ///< martingale (optimal-policy) case
};

/// Sample means of e^{-rt} W_t / F(t, Y_t) at the checkpoints; at the
/// optimum the process is a martingale, so the means should be flat at w.
SupermartingaleReport supermartingale_check(
    const PathBundle& bundle, const SolvedPolicy& policy,
    const std::vector<double>& checkpoint_times);

struct FilterConsistencyReport {
  double regression_slope = 0.0;  ///< dY on theta_hat dt; 1 if consistent
  double slope_se = 0.0;
  double concentration_fraction = 0.0;  ///< paths whose terminal posterior
                                        ///< puts > mass_threshold on the
                                        ///< drawn atom
  double mass_threshold = 0.9;
};

/// Regression of observed increments on the filtered drift and terminal
/// posterior concentration on the drawn atom. draw_from_prior bundles only.
FilterConsistencyReport filter_consistency(const PathBundle& bundle,
                                           const SolvedPolicy& policy);

/// CSV dump, one row per (path, step): t, Y, theta_hat, W_sde, W_surface, pi.
void dump_paths_csv(const PathBundle& bundle, const std::string& path,
                    int max_paths = 100);

}  // namespace ambp
