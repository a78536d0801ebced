#include "ambp/policy.hpp"

#include <algorithm>
#include <cmath>

#include "ambp/numerics.hpp"
#include "ambp/quadrature.hpp"

namespace ambp {

namespace {

// Shared pieces of the integrands. Everything runs on log arguments so that
// deep-tail quadrature nodes (|y| of hundreds) cannot overflow: the demand
// and utility factors are assembled as exp(sum of logs) at the end.
struct Integrands {
  const EnvelopeSolution& env;
  const FilterKernel& kernel;
  double kappa;
  double T;
  double rT;
  double log_kappa;
  double b;       // 1/(alpha-1)
  double alpha;

  Integrands(const EnvelopeSolution& e, const FilterKernel& k, double kap)
      : env(e),
        kernel(k),
        kappa(kap),
        T(k.market().horizon),
        rT(k.market().rate * k.market().horizon),
        log_kappa(std::log(kap)),
        b(1.0 / (e.alpha() - 1.0)),
        alpha(e.alpha()) {}

  // log of the multiplier argument kappa * xi(z)
  double log_arg(double z) const {
    return log_kappa - rT - kernel.log_kernel(T, z);
  }
  bool interior(double log_y) const {
    return env.contract().linear ||
           log_y < std::log(env.concavification_point());
  }
  // log I(arg / delta) (interior branch); delta = 1 in linear mode
  double log_inverse_marginal(double log_y) const {
    double log_delta =
        env.contract().linear ? 0.0 : std::log(env.contract().delta);
    return b * (log_y - log_delta);
  }

  // exp(-rT) * demand * phi_T(z)
  double budget(double z) const {
    double ly = log_arg(z);
    if (!interior(ly)) return 0.0;
    double log_phi = -0.5 * z * z / T - 0.5 * std::log(2.0 * M_PI * T);
    const auto& c = env.contract();
    double li = log_inverse_marginal(ly);
    double head = std::exp(li - std::log(c.linear ? 1.0 : c.delta) - rT + log_phi);
    if (c.linear) return head;
    return head + (c.strike - c.base_fee / c.delta) * std::exp(log_phi - rT);
  }

  // F(T,z) * u(g(demand)) * phi_T(z); u(g(0)) = u(C) on the zero branch
  double value(double z) const {
    double lF = kernel.log_kernel(T, z);
    double ly = log_arg(z);
    double log_phi = -0.5 * z * z / T - 0.5 * std::log(2.0 * M_PI * T);
    if (!interior(ly)) {
      return power_utility(env.contract().base_fee, alpha) *
             std::exp(lF + log_phi);
    }
    // interior utility: u(I(arg/delta)) = exp(alpha * log I) / alpha
    double li = log_inverse_marginal(ly);
    return std::exp(lF + alpha * li + log_phi) / alpha;
  }

  // smooth part of d/dy of the wealth-surface integrand, at absolute
  // observation level v: X'(arg) * arg * (-theta_hat(v)); X'(y)*y = b*I(y/d)/d
  double grad_smooth(double v, double log_phi) const {
    double ly = log_arg(v);
    if (!interior(ly)) return 0.0;
    double li = log_inverse_marginal(ly);
    double theta_hat = kernel.posterior_mean(T, v);
    const auto& c = env.contract();
    double scale = b / (c.linear ? 1.0 : c.delta);
    return -scale * theta_hat * std::exp(li + log_phi);
  }
};

}  // namespace

std::vector<double> demand_breakpoints(double kappa,
                                       const EnvelopeSolution& env,
                                       const FilterKernel& kernel, double lo,
                                       double hi) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("demand_breakpoints: kappa must be > 0");
  if (!env.has_jump()) return {};
  const double T = kernel.market().horizon;
  // kappa * exp(-rT) / F(T,z) = y_hat  <=>  log F(T,z) = target
  const double target = std::log(kappa) - kernel.market().rate * T -
                        std::log(env.concavification_point());
  auto f = [&](double z) { return kernel.log_kernel(T, z) - target; };

  // log F is convex in z: split the scan at its minimum when theta changes
  // sign so a root pair cannot hide inside one scan cell.
  std::vector<double> roots;
  if (kernel.theta_min() < 0.0 && kernel.theta_max() > 0.0) {
    auto slope = [&](double z) { return kernel.posterior_mean(T, z); };
    double zmin = bisect(slope, lo, hi, 0.0, 1e-12 * std::max(1.0, hi - lo));
    auto left = scan_roots(f, lo, zmin, 256, 1e-13 * std::max(1.0, std::abs(zmin - lo)));
    auto right = scan_roots(f, zmin, hi, 256, 1e-13 * std::max(1.0, std::abs(hi - zmin)));
    roots = left;
    roots.insert(roots.end(), right.begin(), right.end());
  } else {
    roots = scan_roots(f, lo, hi, 512, 1e-13 * std::max(1.0, hi - lo));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double budget_cost(double kappa, const EnvelopeSolution& env,
                   const FilterKernel& kernel, const QuadratureSpec& quad) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("budget_cost: kappa must be > 0");
  const double T = kernel.market().horizon;
  const double sd = std::sqrt(T);
  const double lim = quad.tail_width_sd * sd;
  Integrands ig(env, kernel, kappa);
  auto bps = demand_breakpoints(kappa, env, kernel, -lim, lim);
  return integrate_with_breakpoints([&](double z) { return ig.budget(z); },
                                    -lim, lim, bps, sd, quad);
}

SolvedPolicy::SolvedPolicy(EnvelopeSolution env, FilterKernel kernel,
                           double wealth, QuadratureSpec quad,
                           SolverOptions opts)
    : env_(std::move(env)),
      kernel_(std::move(kernel)),
      wealth_(wealth),
      quad_(quad),
      opts_(opts) {}

SolvedPolicy SolvedPolicy::solve(const EnvelopeSolution& env,
                                 const FilterKernel& kernel, double wealth,
                                 const QuadratureSpec& quad,
                                 const SolverOptions& opts) {
  if (!(wealth > 0.0))
    throw std::invalid_argument("SolvedPolicy: wealth must be > 0");
  SolvedPolicy p(env, kernel, wealth, quad, opts);

  auto chi = [&](double k) { return budget_cost(k, p.env_, p.kernel_, quad); };
  double lo = 1e-8, hi = 1.0;
  int expansions = 0;
  while (chi(hi) > wealth) {
    hi *= 2.0;
    if (++expansions > 200)
      throw NumericError("SolvedPolicy: budget bracket expansion failed (hi)");
  }
  expansions = 0;
  while (chi(lo) < wealth) {
    lo *= 0.5;
    if (++expansions > 2000)
      throw NumericError("SolvedPolicy: budget bracket expansion failed (lo)");
  }
  // log-space bisection until the budget itself is met
  const double f_tol = opts.budget_rel_tol * wealth;
  double kappa = std::sqrt(lo * hi);
  for (int i = 0; i < 400; ++i) {
    kappa = std::sqrt(lo * hi);
    double c = chi(kappa);
    if (std::abs(c - wealth) <= f_tol) break;
    if (c > wealth)
      lo = kappa;
    else
      hi = kappa;
    if (i == 399)
      throw NumericError("SolvedPolicy: budget bisection did not converge");
  }
  p.kappa_ = kappa;
  const double lim = quad.tail_width_sd * std::sqrt(kernel.market().horizon);
  p.breakpoints_ = demand_breakpoints(kappa, p.env_, p.kernel_, -lim, lim);
  return p;
}

double SolvedPolicy::terminal_wealth(double xi) const {
  if (!(xi > 0.0))
    throw std::invalid_argument("terminal_wealth: xi must be > 0");
  double y = kappa_ * xi;
  if (env_.has_jump() && y >= env_.concavification_point()) return 0.0;
  return env_.optimal_demand(y);
}

double SolvedPolicy::wealth_surface(double s, double y) const {
  const double T = kernel_.market().horizon;
  if (s < 0.0 || s > T + 1e-12)
    throw std::invalid_argument("wealth_surface: s outside [0, T]");
  if (s == 0.0) return terminal_wealth(kernel_.state_price_density(y));

  Integrands ig(env_, kernel_, kappa_);
  const double sd = std::sqrt(s);
  const double lim = quad_.tail_width_sd * sd;
  // breakpoints live in absolute observation space; shift into z = v - y
  std::vector<double> bps;
  for (double zb : breakpoints_) bps.push_back(zb - y);
  auto f = [&](double z) {
    double log_phi = -0.5 * z * z / s - 0.5 * std::log(2.0 * M_PI * s);
    double ly = ig.log_arg(y + z);
    if (!ig.interior(ly)) return 0.0;
    double li = ig.log_inverse_marginal(ly);
    const auto& c = env_.contract();
    double head = std::exp(li - std::log(c.linear ? 1.0 : c.delta) + log_phi);
    if (c.linear) return head;
    return head + (c.strike - c.base_fee / c.delta) * std::exp(log_phi);
  };
  double integral = integrate_with_breakpoints(f, -lim, lim, bps, sd, quad_);
  return std::exp(-kernel_.market().rate * s) * integral;
}

double SolvedPolicy::grad_wealth_surface(double s, double y) const {
  const double T = kernel_.market().horizon;
  if (!(s > 0.0) || s > T + 1e-12)
    throw std::invalid_argument("grad_wealth_surface: s outside (0, T]");

  Integrands ig(env_, kernel_, kappa_);
  const double sd = std::sqrt(s);
  const double lim = quad_.tail_width_sd * sd;
  std::vector<double> bps;
  for (double zb : breakpoints_) bps.push_back(zb - y);
  auto f = [&](double z) {
    double log_phi = -0.5 * z * z / s - 0.5 * std::log(2.0 * M_PI * s);
    return ig.grad_smooth(y + z, log_phi);
  };
  double smooth = integrate_with_breakpoints(f, -lim, lim, bps, sd, quad_);

  // The demand jumps by jump_size at each breakpoint; differentiating the
  // convolution in y produces a boundary density term the smooth integrand
  // misses. Sign follows the direction the interior region lies in.
  double jump = 0.0;
  if (env_.has_jump()) {
    double h_jump = env_.jump_size();
    for (double zb : breakpoints_) {
      double sign =
          kernel_.posterior_mean(T, zb) >= 0.0 ? 1.0 : -1.0;
      jump += sign * h_jump * gaussian_density(zb - y, s);
    }
  }
  return std::exp(-kernel_.market().rate * s) * (smooth + jump);
}

std::optional<SolvedPolicy::Fraction> SolvedPolicy::risky_fraction(
    double t, double y) const {
  const double T = kernel_.market().horizon;
  if (t < 0.0 || t >= T)
    throw std::invalid_argument("risky_fraction: t outside [0, T)");
  double s = T - t;
  double level = wealth_surface(s, y);
  if (!(level > 1e-12 * wealth_)) return std::nullopt;
  double grad = grad_wealth_surface(s, y);
  double ratio = grad / (kernel_.market().sigma * level);
  return Fraction{ratio, ratio * level, level};
}

double SolvedPolicy::value() const {
  Integrands ig(env_, kernel_, kappa_);
  const double T = kernel_.market().horizon;
  const double sd = std::sqrt(T);
  const double lim = quad_.tail_width_sd * sd;
  return integrate_with_breakpoints([&](double z) { return ig.value(z); },
                                    -lim, lim, breakpoints_, sd, quad_);
}

}  // namespace ambp
