#include "ambp/ambiguity.hpp"

#include <algorithm>
#include <cmath>

#include "ambp/numerics.hpp"

namespace ambp {

std::vector<double> rn_derivative(const DiscretePrior& q,
                                  const DiscretePrior& p) {
  if (q.drifts != p.drifts)
    throw ConfigError(
        "rn_derivative: priors must share the same atom set (Radon-Nikodym "
        "derivative undefined otherwise)");
  std::vector<double> ratios(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q.weights[i] > 0.0) || !(p.weights[i] > 0.0))
      throw ConfigError(
          "rn_derivative: zero atom weight breaks measure equivalence");
    ratios[i] = q.weights[i] / p.weights[i];
  }
  return ratios;
}

double penalty_power(const DiscretePrior& q, const DiscretePrior& p,
                     double lambda) {
  if (!(lambda < 1.0) || lambda == 0.0)
    throw std::invalid_argument("penalty_power: lambda < 1, lambda != 0");
  auto ratios = rn_derivative(q, p);
  const double e = lambda / (lambda - 1.0);
  // log-sum-exp of log p_i + e * log(q_i/p_i)
  double m = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    logs[i] = std::log(p.weights[i]) + e * std::log(ratios[i]);
    m = std::max(m, logs[i]);
  }
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - m);
  double log_moment = m + std::log(sum);
  double log_factor = (1.0 - lambda) / lambda * log_moment;
  if (log_factor > 700.0)
    throw NumericError("penalty_power: factor overflows double range");
  return std::exp(log_factor);
}

double penalty_kl(const DiscretePrior& q, const DiscretePrior& p,
                  double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("penalty_kl: gamma must be > 0");
  auto ratios = rn_derivative(q, p);
  double kl = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    kl += q.weights[i] * std::log(ratios[i]);
  return std::max(kl, 0.0) / gamma;
}

double penalty_log_factor(const DiscretePrior& q, const DiscretePrior& p) {
  auto ratios = rn_derivative(q, p);
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    e += p.weights[i] * std::log(ratios[i]);
  return std::exp(-e);
}

OuterProblem OuterProblem::from_config(const ProblemConfig& cfg) {
  return OuterProblem{cfg.market,  cfg.contract,   cfg.risk, cfg.prior,
                      cfg.wealth,  cfg.quadrature, cfg.solver};
}

EnvelopeSolution make_envelope(const OuterProblem& prob) {
  return EnvelopeSolution::solve(prob.contract, prob.risk.alpha,
                                 prob.solver.root_tol);
}

SolvedPolicy solve_under_prior(const OuterProblem& prob,
                               const DiscretePrior& q,
                               const EnvelopeSolution& env) {
  FilterKernel kernel(q, prob.market);
  return SolvedPolicy::solve(env, kernel, prob.wealth, prob.quadrature,
                             prob.solver);
}

PenaltyEvaluation evaluate_objective(const OuterProblem& prob,
                                     const AmbiguitySpec& spec,
                                     const DiscretePrior& q,
                                     const EnvelopeSolution& env) {
  PenaltyEvaluation ev;
  ev.prior = q;
  ev.value = solve_under_prior(prob, q, env).value();
  switch (spec.kind) {
    case AmbiguityKind::neutral:
      ev.penalty = 1.0;
      ev.objective = ev.value;
      break;
    case AmbiguityKind::power:
      ev.penalty = penalty_power(q, prob.base_prior, spec.lambda);
      ev.objective = std::max(ev.value, 0.0) * ev.penalty;
      break;
    case AmbiguityKind::exponential:
      ev.penalty = penalty_kl(q, prob.base_prior, spec.gamma);
      ev.objective = ev.value + ev.penalty;
      break;
    case AmbiguityKind::log:
      ev.penalty = penalty_log_factor(q, prob.base_prior);
      ev.objective = std::max(ev.value, 0.0) * ev.penalty;
      break;
  }
  return ev;
}

std::vector<long long> ObjectiveMemo::key(const std::vector<double>& w) {
  std::vector<long long> k(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    k[i] = std::llround(w[i] * 1e6);
  return k;
}

std::optional<double> ObjectiveMemo::find(
    const std::vector<double>& weights) const {
  std::lock_guard<std::mutex> lock(mtx_);
  auto it = memo_.find(key(weights));
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

void ObjectiveMemo::insert(const std::vector<double>& weights, double value) {
  std::lock_guard<std::mutex> lock(mtx_);
  memo_.emplace(key(weights), value);
}

namespace {

WorstCaseResult worst_case_two_point(const OuterProblem& prob,
                                     const AmbiguitySpec& spec, int jobs) {
  const double eps = prob.solver.simplex_eps;
  const double step = prob.solver.grid_step;
  EnvelopeSolution env = make_envelope(prob);
  ObjectiveMemo memo;
  int evaluations = 0;

  auto objective_at = [&](double q_up) {
    q_up = std::clamp(q_up, eps, 1.0 - eps);
    DiscretePrior q = DiscretePrior::two_point(prob.base_prior.drifts[0],
                                               prob.base_prior.drifts[1], q_up);
    if (auto hit = memo.find(q.weights)) return *hit;
    double val = evaluate_objective(prob, spec, q, env).objective;
    memo.insert(q.weights, val);
    return val;
  };

  // coarse grid, evaluated concurrently; the memo makes the refinement
  // phase below reuse every grid solve
  std::vector<double> qs;
  for (double q = eps; q < 1.0 - eps + 1e-15; q += step)
    qs.push_back(std::min(q, 1.0 - eps));
  if (qs.back() < 1.0 - eps) qs.push_back(1.0 - eps);
  std::vector<double> vals(qs.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (std::size_t i = 0; i < qs.size(); ++i) vals[i] = objective_at(qs[i]);
  evaluations += static_cast<int>(qs.size());

  std::size_t best = 0;
  for (std::size_t i = 1; i < qs.size(); ++i)
    if (vals[i] < vals[best]) best = i;

  // golden-section refinement within one grid cell of the coarse argmin
  double a = qs[best > 0 ? best - 1 : 0];
  double b = qs[std::min(best + 1, qs.size() - 1)];
  double q_star = golden_min([&](double q) { ++evaluations; return objective_at(q); },
                             a, b, prob.solver.refine_width);
  q_star = std::clamp(q_star, eps, 1.0 - eps);

  WorstCaseResult res;
  res.q_star = q_star;
  res.prior_star = DiscretePrior::two_point(prob.base_prior.drifts[0],
                                            prob.base_prior.drifts[1], q_star);
  res.at_optimum = evaluate_objective(prob, spec, res.prior_star, env);
  res.objective = res.at_optimum.objective;
  res.evaluations = evaluations;
  res.grid.reserve(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) res.grid.emplace_back(qs[i], vals[i]);
  return res;
}

WorstCaseResult worst_case_simplex(const OuterProblem& prob,
                                   const AmbiguitySpec& spec, int jobs) {
  (void)jobs;
  const double eps = prob.solver.simplex_eps;
  const std::size_t n = prob.base_prior.size();
  EnvelopeSolution env = make_envelope(prob);
  int evaluations = 0;

  // weights parametrized by n-1 free coordinates, clamped to the interior
  auto to_weights = [&](const std::vector<double>& x) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      w[i] = std::clamp(x[i], eps, 1.0 - eps);
      sum += w[i];
    }
    w[n - 1] = 1.0 - sum;
    if (w[n - 1] < eps) {
      // renormalize the first n-1 so the last atom keeps eps mass
      double scale = (1.0 - eps) / sum;
      for (std::size_t i = 0; i + 1 < n; ++i) w[i] *= scale;
      w[n - 1] = eps;
    }
    return w;
  };
  auto objective_at = [&](const std::vector<double>& x) {
    DiscretePrior q{prob.base_prior.drifts, to_weights(x)};
    ++evaluations;
    return evaluate_objective(prob, spec, q, env).objective;
  };

  // coarse start: blend the base prior toward each vertex and keep the best
  std::vector<double> best_x(prob.base_prior.weights.begin(),
                             prob.base_prior.weights.end() - 1);
  double best_v = objective_at(best_x);
  for (std::size_t v = 0; v < n; ++v) {
    for (double t : {0.3, 0.6, 0.9}) {
      std::vector<double> x(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double vertex = (i == v) ? 1.0 : 0.0;
        x[i] = (1.0 - t) * prob.base_prior.weights[i] + t * vertex;
      }
      double val = objective_at(x);
      if (val < best_v) {
        best_v = val;
        best_x = x;
      }
    }
  }
  auto x_star = nelder_mead(objective_at, best_x, 0.05,
                            1e-10 * std::max(1.0, std::abs(best_v)), 400);

  WorstCaseResult res;
  res.prior_star = DiscretePrior{prob.base_prior.drifts, to_weights(x_star)};
  res.q_star = res.prior_star.weights.back();
  res.at_optimum = evaluate_objective(prob, spec, res.prior_star, env);
  res.objective = res.at_optimum.objective;
  res.evaluations = evaluations;
  return res;
}

}  // namespace

WorstCaseResult worst_case_prior(const OuterProblem& prob,
                                 const AmbiguitySpec& spec, int jobs) {
  std::vector<std::string> issues;
  validate(prob.base_prior, issues);
  validate(spec, issues);
  if (spec.kind == AmbiguityKind::power &&
      !(prob.risk.alpha > 0.0 && prob.risk.alpha < 1.0))
    issues.push_back(
        "power aggregator requires alpha in (0,1) (positive utility)");
  if (!issues.empty()) throw ConfigError(std::move(issues));

  if (spec.kind == AmbiguityKind::neutral) {
    EnvelopeSolution env = make_envelope(prob);
    WorstCaseResult res;
    res.prior_star = prob.base_prior;
    res.q_star = prob.base_prior.weights.back();
    res.at_optimum = evaluate_objective(prob, spec, prob.base_prior, env);
    res.objective = res.at_optimum.objective;
    res.evaluations = 1;
    return res;
  }
  if (prob.base_prior.size() == 1) {
    // point mass: no room to distort
    EnvelopeSolution env = make_envelope(prob);
    WorstCaseResult res;
    res.prior_star = prob.base_prior;
    res.q_star = 1.0;
    res.at_optimum = evaluate_objective(prob, spec, prob.base_prior, env);
    res.objective = res.at_optimum.objective;
    res.evaluations = 1;
    return res;
  }
  if (prob.base_prior.is_two_point())
    return worst_case_two_point(prob, spec, jobs);
  return worst_case_simplex(prob, spec, jobs);
}

SolutionSummary solve_summary(const ProblemConfig& cfg, int jobs) {
  cfg.validate_or_throw();
  OuterProblem prob = OuterProblem::from_config(cfg);
  WorstCaseResult wc = worst_case_prior(prob, cfg.ambiguity, jobs);
  EnvelopeSolution env = make_envelope(prob);
  SolvedPolicy policy = solve_under_prior(prob, wc.prior_star, env);
  SolutionSummary s;
  s.q_star = wc.q_star;
  s.kappa_star = policy.multiplier();
  s.concavification_point = env.concavification_point();
  s.value = wc.at_optimum.value;
  s.objective = wc.objective;
  if (auto fr = policy.risky_fraction(0.0, 0.0)) s.fraction_at_origin = fr->ratio;
  return s;
}

}  // namespace ambp
