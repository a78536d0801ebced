#include "ambp/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ambp/rng.hpp"

namespace ambp {

// ---------------------------------------------------------------------------
// normal inverse CDF, Wichura's PPND16 (Applied Statistics 241)

double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_icdf: p must lie in (0, 1)");
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double SplitMix64::next_normal() { return normal_icdf(next_uniform()); }

// ---------------------------------------------------------------------------
// policy table

PolicyTable::PolicyTable(const SolvedPolicy& policy, int n_slices, double y_lo,
                         double y_hi, int n_y, double s_min)
    : n_slices_(n_slices), s_min_(s_min), y_lo_(y_lo), n_y_(n_y) {
  const double T = policy.kernel().market().horizon;
  const double sigma = policy.kernel().market().sigma;
  T_ = T;
  dy_ = (y_hi - y_lo) / (n_y - 1);
  log_ratio_ = std::log(T / s_min);
  wealth_rows_.assign(n_slices, std::vector<double>(n_y));
  ratio_rows_.assign(n_slices, std::vector<double>(n_y));
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n_slices; ++k) {
    double s = slice_s(k);
    for (int j = 0; j < n_y; ++j) {
      double y = y_lo_ + j * dy_;
      double w = policy.wealth_surface(s, y);
      double g = policy.grad_wealth_surface(s, y);
      wealth_rows_[k][j] = w;
      ratio_rows_[k][j] = w > 1e-12 * policy.wealth() ? g / (sigma * w) : 0.0;
    }
  }
}

double PolicyTable::slice_s(int k) const {
  // geometric spacing from s_min to T: resolution follows the sqrt(s)
  // length scale of the surface
  return s_min_ * std::exp(log_ratio_ * k / (n_slices_ - 1));
}

double PolicyTable::interp_y(const std::vector<double>& row, double y) const {
  double u = (y - y_lo_) / dy_;
  if (u <= 0.0) return row.front();
  if (u >= n_y_ - 1) return row.back();
  int j = static_cast<int>(u);
  double t = u - j;
  return (1.0 - t) * row[j] + t * row[j + 1];
}

double PolicyTable::lookup(const std::vector<std::vector<double>>& rows,
                           double s, double y) const {
  if (s <= s_min_) return interp_y(rows.front(), y);
  if (s >= T_) return interp_y(rows.back(), y);
  double u = std::log(s / s_min_) / log_ratio_ * (n_slices_ - 1);
  int k = std::min(static_cast<int>(u), n_slices_ - 2);
  double t = u - k;
  return (1.0 - t) * interp_y(rows[k], y) + t * interp_y(rows[k + 1], y);
}

double PolicyTable::wealth(double s, double y) const {
  return lookup(wealth_rows_, s, y);
}

double PolicyTable::fraction(double s, double y) const {
  return lookup(ratio_rows_, s, y);
}

// ---------------------------------------------------------------------------
// simulation

namespace {

void simulate_one_path(const SolvedPolicy& policy, const PolicyTable& table,
                       PathBundle& out, int path, double z_true,
                       SplitMix64 rng) {
  const auto& mkt = policy.kernel().market();
  const double T = mkt.horizon;
  const int n = out.n_steps;
  const double dt = T / n;
  const double sqrt_dt = std::sqrt(dt);
  const double theta = market_price_of_risk(z_true, mkt);
  const std::size_t base = static_cast<std::size_t>(path) * (n + 1);

  double y = 0.0;
  double w_sde = policy.wealth();
  out.observation[base] = 0.0;
  out.posterior_mean[base] = policy.kernel().posterior_mean(0.0, 0.0);
  out.wealth_sde[base] = w_sde;
  out.wealth_surface[base] = policy.wealth();
  for (int k = 0; k < n; ++k) {
    double s = T - out.times[k];
    double ratio = table.fraction(s, y);  // pi / W
    double pi = ratio * w_sde;
    out.position[base + k] = pi;
    double dY = theta * dt + sqrt_dt * rng.next_normal();
    // left-point Euler with absorption at zero wealth
    w_sde += mkt.rate * w_sde * dt + pi * mkt.sigma * dY;
    if (w_sde < 0.0) w_sde = 0.0;
    y += dY;
    out.observation[base + k + 1] = y;
    out.posterior_mean[base + k + 1] =
        policy.kernel().posterior_mean(out.times[k + 1], y);
    out.wealth_sde[base + k + 1] = w_sde;
    if (k + 1 == n) {
      // terminal slice evaluated exactly, no interpolation
      out.wealth_surface[base + n] =
          policy.terminal_wealth(policy.kernel().state_price_density(y));
    } else {
      out.wealth_surface[base + k + 1] = table.wealth(T - out.times[k + 1], y);
    }
  }
  out.position[base + n] = 0.0;
}

double draw_drift(const DiscretePrior& prior, double u) {
  double cum = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    cum += prior.weights[i];
    if (u <= cum) return prior.drifts[i];
  }
  return prior.drifts.back();
}

PathBundle simulate_impl(const SolvedPolicy& policy, int n_paths, int n_steps,
                         std::uint64_t seed, SimMode mode, double z_fixed,
                         int jobs, bool parallel) {
  if (n_paths <= 0) throw std::invalid_argument("simulate: n_paths must be > 0");
  if (n_steps < 100)
    throw std::invalid_argument("simulate: n_steps must be >= 100");
  const auto& mkt = policy.kernel().market();
  const double T = mkt.horizon;

  PathBundle out;
  out.seed = seed;
  out.n_steps = n_steps;
  out.mode = mode;
  out.times.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) out.times[k] = T * k / n_steps;
  const std::size_t total = static_cast<std::size_t>(n_paths) * (n_steps + 1);
  out.drawn_drift.resize(n_paths);
  out.observation.resize(total);
  out.posterior_mean.resize(total);
  out.wealth_sde.resize(total);
  out.wealth_surface.resize(total);
  out.position.resize(total);

  // the policy table covers every observation level the paths can reach
  double theta_span = std::max(std::abs(policy.kernel().theta_min()),
                               std::abs(policy.kernel().theta_max()));
  double y_span = theta_span * T + 6.0 * std::sqrt(T);
  int n_y = static_cast<int>(2.0 * y_span / (0.03 * std::sqrt(T))) + 2;
  PolicyTable table(policy, 128, -y_span, y_span, n_y);

#pragma omp parallel for schedule(static) if (parallel) \
    num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (int p = 0; p < n_paths; ++p) {
    SplitMix64 rng = SplitMix64::path_stream(seed, p);
    double z = z_fixed;
    if (mode == SimMode::draw_from_prior)
      z = draw_drift(policy.kernel().prior(), rng.next_uniform());
    out.drawn_drift[p] = z;
    simulate_one_path(policy, table, out, p, z, rng);
  }
  return out;
}

}  // namespace

PathBundle simulate(const SolvedPolicy& policy, int n_paths, int n_steps,
                    std::uint64_t seed, SimMode mode, double z_fixed,
                    int jobs) {
  return simulate_impl(policy, n_paths, n_steps, seed, mode, z_fixed, jobs,
                       true);
}

PathBundle simulate_serial(const SolvedPolicy& policy, int n_paths,
                           int n_steps, std::uint64_t seed, SimMode mode,
                           double z_fixed) {
  return simulate_impl(policy, n_paths, n_steps, seed, mode, z_fixed, 1,
                       false);
}

MeanSE budget_identity_mc(const SolvedPolicy& policy, int n_draws,
                          std::uint64_t seed, int jobs) {
  if (n_draws <= 1)
    throw std::invalid_argument("budget_identity_mc: need n_draws > 1");
  const auto& mkt = policy.kernel().market();
  const auto& prior = policy.kernel().prior();
  const double T = mkt.horizon;
  std::vector<double> vals(n_draws);
#pragma omp parallel for schedule(static) \
    num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (int i = 0; i < n_draws; ++i) {
    SplitMix64 rng = SplitMix64::path_stream(seed, i);
    double z = draw_drift(prior, rng.next_uniform());
    double theta = market_price_of_risk(z, mkt);
    double y_T = theta * T + std::sqrt(T) * rng.next_normal();
    double xi = policy.kernel().state_price_density(y_T);
    vals[i] = xi * policy.terminal_wealth(xi);
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= n_draws;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= (n_draws - 1.0);
  return MeanSE{mean, std::sqrt(var / n_draws)};
}

SupermartingaleReport supermartingale_check(
    const PathBundle& bundle, const SolvedPolicy& policy,
    const std::vector<double>& checkpoint_times) {
  SupermartingaleReport rep;
  rep.checkpoint_times = checkpoint_times;
  const auto& mkt = policy.kernel().market();
  const double T = mkt.horizon;
  const int n_paths = bundle.n_paths();
  for (double t : checkpoint_times) {
    int step = static_cast<int>(std::llround(t / T * bundle.n_steps));
    step = std::clamp(step, 0, bundle.n_steps);
    double tt = bundle.times[step];
    double mean = 0.0;
    std::vector<double> vals(n_paths);
    for (int p = 0; p < n_paths; ++p) {
      double y = bundle.at(bundle.observation, p, step);
      double w = bundle.at(bundle.wealth_surface, p, step);
      vals[p] = std::exp(-mkt.rate * tt - policy.kernel().log_kernel(tt, y)) * w;
      mean += vals[p];
    }
    mean /= n_paths;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= std::max(1, n_paths - 1);
    rep.discounted_value.push_back({mean, std::sqrt(var / n_paths)});
  }
  rep.non_increasing_within_bands = true;
  rep.flat_within_bands = true;
  for (std::size_t i = 1; i < rep.discounted_value.size(); ++i) {
    double prev = rep.discounted_value[i - 1].mean;
    double cur = rep.discounted_value[i].mean;
    double band = 3.0 * std::hypot(rep.discounted_value[i - 1].se,
                                   rep.discounted_value[i].se);
    if (cur > prev + band) rep.non_increasing_within_bands = false;
    if (std::abs(cur - prev) > band + 1e-12) rep.flat_within_bands = false;
  }
  return rep;
}

FilterConsistencyReport filter_consistency(const PathBundle& bundle,
                                           const SolvedPolicy& policy) {
  FilterConsistencyReport rep;
  const int n_paths = bundle.n_paths();
  const int n = bundle.n_steps;
  const double dt = bundle.times[1] - bundle.times[0];
  const auto& kernel = policy.kernel();
  const double T = kernel.market().horizon;

  // regression through the origin of dY on theta_hat * dt:
  // slope = sum(x dy) / sum(x^2), se from the residual variance
  double sxy = 0.0, sxx = 0.0;
  long long count = 0;
  for (int p = 0; p < n_paths; ++p) {
    for (int k = 0; k < n; ++k) {
      double x = bundle.at(bundle.posterior_mean, p, k) * dt;
      double dy = bundle.at(bundle.observation, p, k + 1) -
                  bundle.at(bundle.observation, p, k);
      sxy += x * dy;
      sxx += x * x;
      ++count;
    }
  }
  rep.regression_slope = sxy / sxx;
  double ss_res = 0.0;
  for (int p = 0; p < n_paths; ++p) {
    for (int k = 0; k < n; ++k) {
      double x = bundle.at(bundle.posterior_mean, p, k) * dt;
      double dy = bundle.at(bundle.observation, p, k + 1) -
                  bundle.at(bundle.observation, p, k);
      double r = dy - rep.regression_slope * x;
      ss_res += r * r;
    }
  }
  rep.slope_se = std::sqrt(ss_res / (count - 1.0) / sxx);

  // terminal posterior concentration on the drawn atom
  int concentrated = 0;
  for (int p = 0; p < n_paths; ++p) {
    double y_T = bundle.at(bundle.observation, p, n);
    DiscretePrior post = kernel.posterior(T, y_T);
    double mass = 0.0;
    for (std::size_t i = 0; i < post.size(); ++i)
      if (post.drifts[i] == bundle.drawn_drift[p]) mass = post.weights[i];
    if (mass > rep.mass_threshold) ++concentrated;
  }
  rep.concentration_fraction = static_cast<double>(concentrated) / n_paths;
  return rep;
}

void dump_paths_csv(const PathBundle& bundle, const std::string& path,
                    int max_paths) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "path,t,Y,theta_hat,W_sde,W_surface,pi\n";
  f.precision(12);
  int limit = std::min(max_paths, bundle.n_paths());
  for (int p = 0; p < limit; ++p) {
    for (int k = 0; k <= bundle.n_steps; ++k) {
      f << p << ',' << bundle.times[k] << ',' << bundle.at(bundle.observation, p, k)
        << ',' << bundle.at(bundle.posterior_mean, p, k) << ','
        << bundle.at(bundle.wealth_sde, p, k) << ','
        << bundle.at(bundle.wealth_surface, p, k) << ','
        << bundle.at(bundle.position, p, k) << '\n';
    }
  }
}

}  // namespace ambp
