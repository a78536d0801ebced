#pragma once
/**
 * @file config.hpp
 * @brief Flat key-value problem configuration (INI-style sections) and its
 *        parser/serializer. Serializing and re-parsing a valid config
 *        reproduces identical parameters bit for bit.
 */

#include <iosfwd>
#include <map>
#include <string>

#include "ambp/types.hpp"

namespace ambp {

/// Quadrature controls for the Gaussian integrals of the solver. Segments
/// are split at every demand breakpoint and then into panels refined
/// adaptively; the integration window is +/- tail_width_sd standard
/// deviations.
struct QuadratureSpec {
  int node_count = 32;         ///< Gauss-Legendre nodes per panel, >= 32
  double tail_width_sd = 10.0; ///< window half-width in std devs, >= 8
  double panel_width_sd = 1.0; ///< initial panel width in std devs
  double rel_tol = 1e-9;       ///< per-segment refinement target
  int max_depth = 12;          ///< panel bisection cap
};

struct SolverOptions {
  double root_tol = 1e-10;       ///< |target| tolerance for concavification root
  double budget_rel_tol = 1e-8;  ///< |chi(kappa*) - w| <= tol * w
  double grid_step = 0.01;       ///< coarse grid over the prior simplex
  double refine_width = 1e-5;    ///< golden-section bracket width
  double simplex_eps = 1e-4;     ///< interior clamp on atom probabilities
};

void validate(const QuadratureSpec& q, std::vector<std::string>& issues);

/// Everything a solve needs: market, contract, preferences, belief, budget.
struct ProblemConfig {
  MarketParams market;
  Contract contract;
  RiskPrefs risk;
  AmbiguitySpec ambiguity;
  DiscretePrior prior;
  double wealth = 10.0;
  QuadratureSpec quadrature;
  SolverOptions solver;

  /// Table-1 defaults: r=0.02, sigma=0.3, T=10, delta=0.2, K=1, C=0.02,
  /// alpha=0.5, two-point prior z=(0.03,0.09) with weights (0.2,0.8), w=10.
  static ProblemConfig defaults();

  /// Throws ConfigError listing every violated invariant. The power
  /// aggregator additionally requires alpha in (0,1) so expected utility
  /// stays positive.
  void validate_or_throw() const;
};

/// Parse an INI-style config ("[section]" lines, "key = value" pairs, '#'
/// comments, lists comma-separated). Unknown keys are rejected.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config_file(const std::string& path);

/// Inverse of parse_config; doubles are written with enough digits to
/// round-trip exactly.
std::string serialize_config(const ProblemConfig& cfg);

/// "key = value" lines of the resolved config, used for self-describing
/// output headers.
std::map<std::string, std::string> config_entries(const ProblemConfig& cfg);

std::string format_double(double v);  ///< shortest exact round-trip form

}  // namespace ambp
