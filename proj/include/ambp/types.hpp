#pragma once
/**
 * @file types.hpp
 * @brief Market, contract, preference and belief parameters shared by the
 *        whole library. All types are immutable value types once validated,
 *        so concurrent read access is unrestricted.
 *
 * Units: rates are per year (decimal), volatility per sqrt-year, the horizon
 * in years, wealth and strike in the same currency unit.
 */

#include <stdexcept>
#include <string>
#include <vector>

namespace ambp {

/// Raised when a configuration fails validation. Carries one message per
/// offending field so the CLI can print a full report instead of the first
/// problem only.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  explicit ConfigError(const std::string& issue)
      : ConfigError(std::vector<std::string>{issue}) {}
  const std::vector<std::string>& issues() const { return issues_; }

private:
  static std::string join(const std::vector<std::string>& v);
  std::vector<std::string> issues_;
};

/// Raised when an iteration (root bracketing, quadrature refinement,
/// optimizer) fails to converge.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct MarketParams {
  double rate = 0.02;       ///< risk-free rate r >= 0
  double sigma = 0.3;       ///< volatility > 0
  double horizon = 10.0;    ///< terminal time T > 0
};

/// Option-based compensation: delta shares of a call on the fund struck at K
/// plus a fixed fee C, i.e. payoff(x) = delta*(x-K)^+ + C. `linear` replaces
/// the payoff by the identity (delta=1, K=0, C=0), which recovers the
/// classical concave benchmark and needs no concavification.
struct Contract {
  double delta = 0.2;
  double strike = 1.0;
  double base_fee = 0.02;
  bool linear = false;

  static Contract linear_payoff() { return Contract{1.0, 0.0, 0.0, true}; }

  /// payoff(x) = delta*(x-K)^+ + C (or x in linear mode)
  double payoff(double x) const {
    if (linear) return x;
    double itm = x - strike;
    return delta * (itm > 0.0 ? itm : 0.0) + base_fee;
  }
};

struct RiskPrefs {
  double alpha = 0.5;  ///< power-utility exponent, alpha < 1, alpha != 0
  double rra() const { return 1.0 - alpha; }
};

/// u(x) = x^alpha / alpha
double power_utility(double x, double alpha);
/// u(g(x)) with the convention u(g(0)) = u(C): the payoff floor is what a
/// zero-wealth outcome is worth.
double composed_utility(double x, const Contract& c, double alpha);

enum class AmbiguityKind { neutral, power, exponential, log };

/// Aggregator choice plus its aversion parameter. `lambda` is the power
/// exponent (relative ambiguity aversion = 1 - lambda); `gamma` the absolute
/// ambiguity aversion of the exponential aggregator.
struct AmbiguitySpec {
  AmbiguityKind kind = AmbiguityKind::neutral;
  double lambda = 0.0;  ///< power kind: lambda < 1, lambda != 0
  double gamma = 0.0;   ///< exponential kind: gamma > 0

  static AmbiguitySpec neutral() { return {AmbiguityKind::neutral, 0.0, 0.0}; }
  static AmbiguitySpec power(double lambda) {
    return {AmbiguityKind::power, lambda, 0.0};
  }
  static AmbiguitySpec exponential(double gamma) {
    return {AmbiguityKind::exponential, 0.0, gamma};
  }
  static AmbiguitySpec log_kind() { return {AmbiguityKind::log, 0.0, 0.0}; }
};

std::string to_string(AmbiguityKind k);

/// Finite belief over the unknown drift: atoms (z_i, p_i) with p_i > 0,
/// sum p_i = 1 and z_i strictly increasing. Finite support keeps the filter
/// kernel an exact finite sum and satisfies the sub-Gaussian prior condition
/// automatically.
struct DiscretePrior {
  std::vector<double> drifts;   ///< z_i, strictly increasing
  std::vector<double> weights;  ///< p_i > 0, sum to 1

  std::size_t size() const { return drifts.size(); }

  /// Two-point convenience: probability of the upper drift atom.
  bool is_two_point() const { return drifts.size() == 2; }
  double upper_prob() const { return weights.back(); }

  static DiscretePrior point_mass(double z) { return {{z}, {1.0}}; }
  static DiscretePrior two_point(double z_low, double z_high, double q_high) {
    return {{z_low, z_high}, {1.0 - q_high, q_high}};
  }

  double mean() const;
};

/// Market price of risk theta = (z - r) / sigma for drift level z.
double market_price_of_risk(double z, const MarketParams& m);

/// Append diagnostics for each violated invariant; empty result means valid.
void validate(const MarketParams& m, std::vector<std::string>& issues);
void validate(const Contract& c, std::vector<std::string>& issues);
void validate(const RiskPrefs& r, std::vector<std::string>& issues);
void validate(const AmbiguitySpec& a, std::vector<std::string>& issues);
void validate(const DiscretePrior& p, std::vector<std::string>& issues);

}  // namespace ambp
