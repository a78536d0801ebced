#include "ambp/types.hpp"

#include <cmath>
#include <sstream>

namespace ambp {

std::string ConfigError::join(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& s : v) os << "\n  - " << s;
  return os.str();
}

double power_utility(double x, double alpha) {
  if (x < 0.0) throw std::invalid_argument("power_utility: x must be >= 0");
  if (x == 0.0) {
    // u(0) = 0 for alpha in (0,1), -inf for alpha < 0
    return alpha > 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return std::pow(x, alpha) / alpha;
}

double composed_utility(double x, const Contract& c, double alpha) {
  return power_utility(c.payoff(x), alpha);
}

std::string to_string(AmbiguityKind k) {
  switch (k) {
    case AmbiguityKind::neutral: return "neutral";
    case AmbiguityKind::power: return "power";
    case AmbiguityKind::exponential: return "exponential";
    case AmbiguityKind::log: return "log";
  }
  return "?";
}

double DiscretePrior::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < drifts.size(); ++i) m += weights[i] * drifts[i];
  return m;
}

double market_price_of_risk(double z, const MarketParams& m) {
  return (z - m.rate) / m.sigma;
}

void validate(const MarketParams& m, std::vector<std::string>& issues) {
  if (!(m.sigma > 0.0)) issues.push_back("market.sigma: must be > 0");
  if (!(m.horizon > 0.0)) issues.push_back("market.horizon: must be > 0");
  if (!(m.rate >= 0.0)) issues.push_back("market.r: must be >= 0");
}

void validate(const Contract& c, std::vector<std::string>& issues) {
  if (c.linear) {
    if (c.delta != 1.0 || c.strike != 0.0 || c.base_fee != 0.0)
      issues.push_back(
          "contract: linear mode forces (delta, strike, base_fee) = (1, 0, 0)");
    return;
  }
  if (!(c.delta > 0.0 && c.delta <= 1.0))
    issues.push_back("contract.delta: must lie in (0, 1]");
  if (!(c.strike >= 0.0)) issues.push_back("contract.strike: must be >= 0");
  // C = 0 with an option payoff degenerates the concavification-point
  // bracket (0, delta*C^(alpha-1)); excluded.
  if (!(c.base_fee > 0.0))
    issues.push_back("contract.base_fee: must be > 0 in option mode");
}

void validate(const RiskPrefs& r, std::vector<std::string>& issues) {
  if (!(r.alpha < 1.0) || r.alpha == 0.0)
    issues.push_back("risk.alpha: must satisfy alpha < 1, alpha != 0");
}

void validate(const AmbiguitySpec& a, std::vector<std::string>& issues) {
  switch (a.kind) {
    case AmbiguityKind::power:
      if (!(a.lambda < 1.0) || a.lambda == 0.0)
        issues.push_back("ambiguity.lambda: must satisfy lambda < 1, lambda != 0");
      break;
    case AmbiguityKind::exponential:
      if (!(a.gamma > 0.0)) issues.push_back("ambiguity.gamma: must be > 0");
      break;
    default:
      break;
  }
}

void validate(const DiscretePrior& p, std::vector<std::string>& issues) {
  if (p.drifts.empty() || p.drifts.size() != p.weights.size()) {
    issues.push_back("prior: drift and weight lists must be non-empty and equal length");
    return;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p.weights[i] > 0.0))
      issues.push_back("prior.p[" + std::to_string(i) +
                       "]: atom probabilities must be strictly positive");
    sum += p.weights[i];
    if (i > 0 && !(p.drifts[i] > p.drifts[i - 1])) {
      issues.push_back("prior.z: duplicate atoms (drift levels must be strictly increasing)");
      break;
    }
  }
  if (std::abs(sum - 1.0) > 1e-12)
    issues.push_back("prior.p: probabilities must sum to 1 (within 1e-12)");
}

}  // namespace ambp
