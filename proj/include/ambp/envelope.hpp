#pragma once
/**
 * @file envelope.hpp
 * @brief Pointwise maximizer of u(g(x)) - y*x over x >= 0 for the option
 *        payoff g. The composed objective is non-concave: it is flat below
 *        the strike, so the maximizer is all-or-nothing. For multipliers
 *        below the concavification point the demand sits on the interior
 *        branch h(y) > K; above it the demand drops to zero.
 *
 * Writing I(x) = x^(1/(alpha-1)) for the inverse marginal utility, the
 * interior branch is h(y) = (I(y/delta) - C)/delta + K and the
 * concavification point is the unique root of
 *     u(g(h(y))) - u(C) = y h(y)
 * on (0, delta * C^(alpha-1)). In linear mode the objective is concave,
 * the demand is I(y) everywhere and the point is +infinity.
 */

#include <limits>

#include "ambp/types.hpp"

namespace ambp {

/// I(x) = x^(1/(alpha-1)), the inverse of marginal power utility.
/// Strictly decreasing; throws on x <= 0.
double inverse_marginal(double x, double alpha);

/// Demand structure for one (contract, alpha) pair.
class EnvelopeSolution {
public:
  /// Root tolerance applies to |u(g(h(y))) - u(C) - y h(y)| at the point.
  static EnvelopeSolution solve(const Contract& contract, double alpha,
                                double tol = 1e-10);

  const Contract& contract() const { return contract_; }
  double alpha() const { return alpha_; }
  double tol() const { return tol_; }

  /// Concavification point; +infinity in linear mode.
  double concavification_point() const { return y_hat_; }
  bool has_jump() const { return !contract_.linear; }
  /// Upper end of the root bracket, delta * C^(alpha-1).
  double bracket_end() const { return bracket_end_; }

  /// Interior branch h(y); requires 0 < y < bracket_end().
  double interior_demand(double y) const;

  /// The maximizer itself: h(y) for y < y_hat, 0 for y >= y_hat
  /// (ties resolved to the zero branch); I(y) in linear mode.
  double optimal_demand(double y) const;

  /// Derivative of optimal_demand on the interior branch (0 beyond it,
  /// undefined exactly at the jump).
  double demand_slope(double y) const;

  /// Jump size h(y_hat-) of the demand at the concavification point.
  double jump_size() const;

  /// u(g(h(y))) - u(C) - y h(y); strictly decreasing on the bracket.
  double envelope_gap(double y) const;

private:
  EnvelopeSolution() = default;
  Contract contract_;
  double alpha_ = 0.0;
  double tol_ = 0.0;
  double y_hat_ = std::numeric_limits<double>::infinity();
  double bracket_end_ = std::numeric_limits<double>::infinity();
};

/// Independent grid-search oracle: argmax over an n-point grid on
/// [0, grid_max] of u(g(x)) - y*x, ties toward smaller x. Exists so the
/// closed-form demand above can be cross-checked without sharing any code
/// path with it.
double brute_force_demand(double y, const Contract& contract, double alpha,
                          double grid_max, int grid_n);

}  // namespace ambp
