#pragma once
/**
 * @file policy.hpp
 * @brief Martingale solution of the drift-uncertain problem for a fixed
 *        prior: budget function, Lagrange multiplier, terminal wealth,
 *        wealth surface and its gradient, trading fraction, and the value
 *        of the objective at the optimum.
 *
 * All expectations are taken under the measure that turns the observation
 * process into a standard Brownian motion; the filter kernel F supplies the
 * density weight where the original measure is needed. Integrands are
 * piecewise smooth with jumps at the demand breakpoints, so every
 * quadrature below splits its window there.
 */

#include <optional>
#include <vector>

#include "ambp/config.hpp"
#include "ambp/envelope.hpp"
#include "ambp/filtering.hpp"

namespace ambp {

/// Observation levels z where kappa * xi(z) crosses the concavification
/// point, restricted to [lo, hi]. log F is convex in z, so there are at
/// most two crossings; for single-signed market prices of risk at most one.
std::vector<double> demand_breakpoints(double kappa,
                                       const EnvelopeSolution& env,
                                       const FilterKernel& kernel, double lo,
                                       double hi);

/// Present cost of the candidate claim: chi(kappa) =
/// E[ exp(-rT) * demand(kappa * exp(-rT) / F(T, Z)) ], Z ~ N(0, T).
/// Strictly decreasing in kappa.
double budget_cost(double kappa, const EnvelopeSolution& env,
                   const FilterKernel& kernel, const QuadratureSpec& quad);

/// Immutable result of a solve; all evaluators are pure and thread-safe.
class SolvedPolicy {
public:
  /// Finds the multiplier with |chi(kappa) - wealth| <= budget_rel_tol *
  /// wealth by expanding a bracket and bisecting in log space.
  static SolvedPolicy solve(const EnvelopeSolution& env,
                            const FilterKernel& kernel, double wealth,
                            const QuadratureSpec& quad = {},
                            const SolverOptions& opts = {});

  double multiplier() const { return kappa_; }
  double wealth() const { return wealth_; }
  const EnvelopeSolution& envelope() const { return env_; }
  const FilterKernel& kernel() const { return kernel_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  /// Terminal-kernel breakpoints of this policy's demand, in observation
  /// space (cached at solve time).
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// xi-cutoff y_hat / kappa*: terminal wealth is zero for xi above it.
  double cutoff_xi() const {
    return env_.concavification_point() / kappa_;
  }

  /// W*(xi) = demand(kappa* xi): interior branch below the cutoff, zero
  /// above, with a single downward jump at the cutoff.
  double terminal_wealth(double xi) const;

  /// Y(s, y): value of the claim with s years remaining at observation
  /// level y. Y(0, .) equals terminal_wealth composed with the state-price
  /// map; Y(T, 0) equals the initial wealth.
  double wealth_surface(double s, double y) const;

  /// d/dy Y(s, y) for s > 0. The demand jump contributes an explicit
  /// boundary term jump_size * phi_s(zbar - y) per breakpoint on top of the
  /// smooth integrand; central differences of wealth_surface validate it.
  double grad_wealth_surface(double s, double y) const;

  /// pi/W at time t, observation y: grad / (sigma * wealth level), plus the
  /// dollar position pi. Empty when the wealth level is below
  /// 1e-12 * initial wealth (the ratio is 0/0 noise there).
  struct Fraction {
    double ratio;
    double dollars;
    double wealth_level;
  };
  std::optional<Fraction> risky_fraction(double t, double y) const;

  /// Expected utility of the optimal claim under the solving prior.
  double value() const;

private:
  SolvedPolicy(EnvelopeSolution env, FilterKernel kernel, double wealth,
               QuadratureSpec quad, SolverOptions opts);

  EnvelopeSolution env_;
  FilterKernel kernel_;
  double wealth_;
  QuadratureSpec quad_;
  SolverOptions opts_;
  double kappa_ = 0.0;
  std::vector<double> breakpoints_;
};

}  // namespace ambp
