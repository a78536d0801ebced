#pragma once
/**
 * @file filtering.hpp
 * @brief Exact nonlinear filter for a finite-support drift prior.
 *
 * The observation process Y is a Brownian motion with unknown drift theta
 * (the market price of risk). For a finite prior the filter kernel
 *     F(t, y) = sum_i p_i exp(theta_i y - theta_i^2 t / 2)
 * is an exact finite sum; the posterior mean of theta given Y_t = y is
 * F_y / F, the measure change that turns Y into a standard Brownian motion
 * has density 1/F, and the state-price density is exp(-rT)/F(T, Y_T).
 *
 * Exponentials are evaluated in shifted log-sum-exp form so deep tail
 * observations (quadrature nodes many standard deviations out) cannot
 * overflow.
 */

#include <vector>

#include "ambp/types.hpp"

namespace ambp {

class FilterKernel {
public:
  FilterKernel(const DiscretePrior& prior, const MarketParams& market);

  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& weights() const { return weights_; }
  const MarketParams& market() const { return market_; }
  const DiscretePrior& prior() const { return prior_; }

  /// log F(t, y)
  double log_kernel(double t, double y) const;
  /// F(t, y) = sum_i p_i exp(theta_i y - theta_i^2 t / 2) > 0
  double kernel(double t, double y) const;
  /// F_y(t, y) = sum_i p_i theta_i exp(...)
  double kernel_dy(double t, double y) const;

  /// Posterior mean of theta given Y_t = y; lies in [min theta, max theta].
  double posterior_mean(double t, double y) const;

  /// Posterior belief over the same drift atoms given Y_t = y.
  DiscretePrior posterior(double t, double y) const;

  /// xi(y_T) = exp(-r T) / F(T, y_T), the price density of the terminal
  /// observation state.
  double state_price_density(double y_T) const;
  double log_state_price_density(double y_T) const;

  bool is_point_mass() const { return thetas_.size() == 1; }
  double theta_min() const { return thetas_.front(); }
  double theta_max() const { return thetas_.back(); }

private:
  /// posterior weights at (t, y), normalized in place
  void posterior_weights(double t, double y, std::vector<double>& out) const;

  DiscretePrior prior_;
  MarketParams market_;
  std::vector<double> thetas_;
  std::vector<double> weights_;
};

}  // namespace ambp
