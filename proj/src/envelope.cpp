#include "ambp/envelope.hpp"

#include <cmath>

#include "ambp/numerics.hpp"

namespace ambp {

double inverse_marginal(double x, double alpha) {
  if (!(x > 0.0))
    throw std::invalid_argument("inverse_marginal: x must be > 0");
  return std::pow(x, 1.0 / (alpha - 1.0));
}

EnvelopeSolution EnvelopeSolution::solve(const Contract& contract, double alpha,
                                         double tol) {
  EnvelopeSolution env;
  env.contract_ = contract;
  env.alpha_ = alpha;
  env.tol_ = tol;
  if (contract.linear) return env;  // concave objective, no jump

  if (!(contract.base_fee > 0.0))
    throw std::invalid_argument(
        "EnvelopeSolution: option mode requires base_fee > 0");

  const double hi = contract.delta * std::pow(contract.base_fee, alpha - 1.0);
  env.bracket_end_ = hi;
  if (contract.strike == 0.0) {
    // affine payoff: demand reaches zero continuously at the bracket end
    env.y_hat_ = hi;
    return env;
  }
  // h(y) blows up as y -> 0; start the bracket epsilon away from it.
  const double lo = 1e-12 * hi;
  auto gap = [&env](double y) { return env.envelope_gap(y); };
  if (!(gap(lo) > 0.0) || !(gap(hi) < 0.0))
    throw NumericError(
        "EnvelopeSolution: no sign change on (0, delta*C^(alpha-1)); "
        "parameters violate the concavification bracket");
  env.y_hat_ = bisect(gap, lo, hi, tol, 0.0);
  return env;
}

double EnvelopeSolution::interior_demand(double y) const {
  if (!(y > 0.0) || !(y < bracket_end_))
    throw std::invalid_argument(
        "interior_demand: y outside (0, delta*C^(alpha-1))");
  const auto& c = contract_;
  return (inverse_marginal(y / c.delta, alpha_) - c.base_fee) / c.delta +
         c.strike;
}

double EnvelopeSolution::optimal_demand(double y) const {
  if (!(y > 0.0)) throw std::invalid_argument("optimal_demand: y must be > 0");
  if (contract_.linear) return inverse_marginal(y, alpha_);
  if (y >= y_hat_) return 0.0;
  return interior_demand(y);
}

double EnvelopeSolution::demand_slope(double y) const {
  if (!(y > 0.0)) throw std::invalid_argument("demand_slope: y must be > 0");
  if (contract_.linear) {
    double b = 1.0 / (alpha_ - 1.0);
    return b * std::pow(y, b - 1.0);
  }
  if (y >= y_hat_) return 0.0;
  // h'(y) = I'(y/delta) / delta^2
  double b = 1.0 / (alpha_ - 1.0);
  return b * std::pow(y / contract_.delta, b - 1.0) /
         (contract_.delta * contract_.delta);
}

double EnvelopeSolution::jump_size() const {
  if (contract_.linear) return 0.0;
  const auto& c = contract_;
  return (inverse_marginal(y_hat_ / c.delta, alpha_) - c.base_fee) / c.delta +
         c.strike;
}

double EnvelopeSolution::envelope_gap(double y) const {
  // g(h(y)) = I(y/delta) by construction, so no cancellation through h
  const auto& c = contract_;
  double interior_payoff = inverse_marginal(y / c.delta, alpha_);
  double h = (interior_payoff - c.base_fee) / c.delta + c.strike;
  return power_utility(interior_payoff, alpha_) -
         power_utility(c.base_fee, alpha_) - y * h;
}

double brute_force_demand(double y, const Contract& contract, double alpha,
                          double grid_max, int grid_n) {
  double best_x = 0.0;
  double best_v = composed_utility(0.0, contract, alpha);
  for (int i = 1; i < grid_n; ++i) {
    double x = grid_max * i / (grid_n - 1);
    double v = composed_utility(x, contract, alpha) - y * x;
    if (v > best_v) {  // strict: ties keep the smaller x
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace ambp
