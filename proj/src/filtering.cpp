#include "ambp/filtering.hpp"

#include <algorithm>
#include <cmath>

namespace ambp {

FilterKernel::FilterKernel(const DiscretePrior& prior,
                           const MarketParams& market)
    : prior_(prior), market_(market) {
  std::vector<std::string> issues;
  validate(prior, issues);
  validate(market, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  thetas_.reserve(prior.size());
  for (double z : prior.drifts)
    thetas_.push_back(market_price_of_risk(z, market));
  weights_ = prior.weights;
}

double FilterKernel::log_kernel(double t, double y) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas_.size(); ++i)
    m = std::max(m, thetas_[i] * y - 0.5 * thetas_[i] * thetas_[i] * t);
  double sum = 0.0;
  for (std::size_t i = 0; i < thetas_.size(); ++i)
    sum += weights_[i] *
           std::exp(thetas_[i] * y - 0.5 * thetas_[i] * thetas_[i] * t - m);
  return m + std::log(sum);
}

double FilterKernel::kernel(double t, double y) const {
  return std::exp(log_kernel(t, y));
}

double FilterKernel::kernel_dy(double t, double y) const {
  return posterior_mean(t, y) * kernel(t, y);
}

void FilterKernel::posterior_weights(double t, double y,
                                     std::vector<double>& out) const {
  out.resize(thetas_.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    out[i] = std::log(weights_[i]) + thetas_[i] * y -
             0.5 * thetas_[i] * thetas_[i] * t;
    m = std::max(m, out[i]);
  }
  double sum = 0.0;
  for (double& w : out) {
    w = std::exp(w - m);
    sum += w;
  }
  for (double& w : out) w /= sum;
}

double FilterKernel::posterior_mean(double t, double y) const {
  std::vector<double> w;
  posterior_weights(t, y, w);
  double mean = 0.0;
  for (std::size_t i = 0; i < thetas_.size(); ++i) mean += w[i] * thetas_[i];
  return mean;
}

DiscretePrior FilterKernel::posterior(double t, double y) const {
  DiscretePrior post;
  post.drifts = prior_.drifts;
  posterior_weights(t, y, post.weights);
  return post;
}

double FilterKernel::log_state_price_density(double y_T) const {
  return -market_.rate * market_.horizon - log_kernel(market_.horizon, y_T);
}

double FilterKernel::state_price_density(double y_T) const {
  return std::exp(log_state_price_density(y_T));
}

}  // namespace ambp
