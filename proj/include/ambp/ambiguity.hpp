#pragma once
/**
 * @file ambiguity.hpp
 * @brief Penalty functionals of the three smooth-ambiguity aggregators and
 *        the outer minimization over priors that produces the distorted
 *        belief. Each candidate prior triggers a full inner solve; results
 *        are memoized per sweep so grid and refinement phases never repeat
 *        a solve.
 */

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "ambp/config.hpp"
#include "ambp/policy.hpp"

namespace ambp {

/// Per-atom ratios q_i / p_i. Requires identical atom sets with strictly
/// positive weights on both sides (equivalent measures); throws ConfigError
/// otherwise.
std::vector<double> rn_derivative(const DiscretePrior& q,
                                  const DiscretePrior& p);

/// Power-aggregator penalty factor
///   ( E_p[ (q/p)^(lambda/(lambda-1)) ] )^((1-lambda)/lambda)  >= 1,
/// equal to 1 at q = p. Evaluated in the log domain: for lambda near 1 the
/// inner exponent is in the hundreds and overflows otherwise.
double penalty_power(const DiscretePrior& q, const DiscretePrior& p,
                     double lambda);

/// Relative entropy penalty (1/gamma) * KL(q || p) >= 0 with 0 log 0 := 0.
double penalty_kl(const DiscretePrior& q, const DiscretePrior& p,
                  double gamma);

/// Log-aggregator factor exp(-E_p[log(q/p)]) = exp(KL(p || q)) >= 1.
double penalty_log_factor(const DiscretePrior& q, const DiscretePrior& p);

/// One outer-objective evaluation at prior q: the solved inner value, the
/// penalty component, and their combination per aggregator.
struct PenaltyEvaluation {
  double objective;
  double penalty;  ///< multiplicative factor or additive term per kind
  double value;    ///< V(w; q), inner solve under q
  DiscretePrior prior;
};

/// Fixed problem data for the outer search (everything except the prior).
struct OuterProblem {
  MarketParams market;
  Contract contract;
  RiskPrefs risk;
  DiscretePrior base_prior;  ///< the reference belief the penalty anchors to
  double wealth;
  QuadratureSpec quadrature;
  SolverOptions solver;

  static OuterProblem from_config(const ProblemConfig& cfg);
};

/// Inner solve under prior q (envelope is prior-independent and may be
/// shared; pass the one from make_envelope for repeated calls).
SolvedPolicy solve_under_prior(const OuterProblem& prob,
                               const DiscretePrior& q,
                               const EnvelopeSolution& env);
EnvelopeSolution make_envelope(const OuterProblem& prob);

PenaltyEvaluation evaluate_objective(const OuterProblem& prob,
                                     const AmbiguitySpec& spec,
                                     const DiscretePrior& q,
                                     const EnvelopeSolution& env);

/// Thread-safe memo of objective values keyed by the prior weights at 1e-6
/// resolution. Grid evaluations may insert concurrently.
class ObjectiveMemo {
public:
  std::optional<double> find(const std::vector<double>& weights) const;
  void insert(const std::vector<double>& weights, double value);

private:
  static std::vector<long long> key(const std::vector<double>& w);
  mutable std::mutex mtx_;
  std::map<std::vector<long long>, double> memo_;
};

struct WorstCaseResult {
  DiscretePrior prior_star;
  double q_star = 0.0;  ///< upper-atom probability (two-point case)
  double objective = 0.0;
  PenaltyEvaluation at_optimum;
  int evaluations = 0;
  std::vector<std::pair<double, double>> grid;  ///< (q, objective) diagnostics
};

/// Outer minimization over the prior simplex interior.
/// Two-point priors: coarse grid (solver.grid_step) on
/// [eps, 1-eps] followed by golden-section refinement to
/// solver.refine_width. General finite priors: Nelder-Mead from the best
/// vertex-interior start found on a coarse grid.
/// The grid phase evaluates candidates concurrently when jobs > 1.
WorstCaseResult worst_case_prior(const OuterProblem& prob,
                                 const AmbiguitySpec& spec, int jobs = 1);

struct SolutionSummary {
  double q_star;
  double kappa_star;
  double concavification_point;
  double value;
  double objective;
  std::optional<double> fraction_at_origin;  ///< pi/W at t=0, y=0
};

/// Full pipeline for one config: worst-case prior (or the base prior when
/// neutral), the policy under it, and headline numbers.
SolutionSummary solve_summary(const ProblemConfig& cfg, int jobs = 1);

}  // namespace ambp
