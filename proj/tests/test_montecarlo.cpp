#include <doctest.h>

#include <cmath>

#include "ambp/montecarlo.hpp"
#include "ambp/rng.hpp"

using namespace ambp;

namespace {
const MarketParams kMkt{0.02, 0.3, 10.0};
const Contract kBench{0.2, 1.0, 0.02, false};
const DiscretePrior kPrior = DiscretePrior::two_point(0.03, 0.09, 0.8);

SolvedPolicy solve_bench(double wealth = 10.0) {
  auto env = EnvelopeSolution::solve(kBench, 0.5);
  FilterKernel kernel(kPrior, kMkt);
  return SolvedPolicy::solve(env, kernel, wealth);
}
}  // namespace

TEST_CASE("normal icdf hits reference quantiles") {
  CHECK(normal_icdf(0.5) == 0.0);
  CHECK(normal_icdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(normal_icdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-13));
  CHECK(normal_icdf(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(normal_icdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
  CHECK_THROWS_AS(normal_icdf(0.0), std::invalid_argument);
}

TEST_CASE("splitmix64 streams are deterministic and decorrelated") {
  SplitMix64 a(42), b(42), c(43);
  for (int i = 0; i < 16; ++i) {
    auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
  // path streams: same (seed, index) -> same stream; different index -> new
  auto s1 = SplitMix64::path_stream(7, 100);
  auto s2 = SplitMix64::path_stream(7, 100);
  auto s3 = SplitMix64::path_stream(7, 101);
  CHECK(s1.next_u64() == s2.next_u64());
  CHECK(s1.next_u64() != s3.next_u64());
  // uniforms stay inside the open interval
  SplitMix64 u(1);
  for (int i = 0; i < 10000; ++i) {
    double x = u.next_uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("simulation determinism across thread counts") {
  auto policy = solve_bench();
  auto serial = simulate_serial(policy, 64, 100, 2024, SimMode::draw_from_prior);
  auto par2 = simulate(policy, 64, 100, 2024, SimMode::draw_from_prior, 0.0, 2);
  auto par1 = simulate(policy, 64, 100, 2024, SimMode::draw_from_prior, 0.0, 1);
  CHECK(serial.observation == par2.observation);
  CHECK(serial.wealth_sde == par2.wealth_sde);
  CHECK(serial.wealth_surface == par2.wealth_surface);
  CHECK(serial.position == par2.position);
  CHECK(serial.drawn_drift == par2.drawn_drift);
  CHECK(serial.wealth_sde == par1.wealth_sde);
  // different seed, different paths
  auto other = simulate_serial(policy, 64, 100, 2025, SimMode::draw_from_prior);
  CHECK(other.observation != serial.observation);
}

TEST_CASE("zero excess return holds the bond forever") {
  // linear payoff, drift pinned at the risk-free rate: no position, wealth
  // accrues at r exactly
  auto env = EnvelopeSolution::solve(Contract::linear_payoff(), 0.5);
  FilterKernel kernel(DiscretePrior::point_mass(kMkt.rate), kMkt);
  auto policy = SolvedPolicy::solve(env, kernel, 10.0);
  auto bundle = simulate_serial(policy, 8, 128, 9, SimMode::fixed_drift, kMkt.rate);
  for (int p = 0; p < bundle.n_paths(); ++p) {
    for (int k = 0; k <= bundle.n_steps; ++k) {
      CHECK(std::abs(bundle.at(bundle.position, p, k)) < 1e-7);
      double growth = 10.0 * std::exp(kMkt.rate * bundle.times[k]);
      // Euler compounding of r W dt vs continuous compounding: O(dt) gap
      CHECK(bundle.at(bundle.wealth_sde, p, k) ==
            doctest::Approx(growth).epsilon(2e-3));
    }
  }
}

TEST_CASE("both wealth constructions stay non-negative") {
  auto policy = solve_bench();
  auto bundle = simulate_serial(policy, 128, 100, 77, SimMode::draw_from_prior);
  for (int p = 0; p < bundle.n_paths(); ++p) {
    for (int k = 0; k <= bundle.n_steps; ++k) {
      CHECK(bundle.at(bundle.wealth_sde, p, k) >= 0.0);
      CHECK(bundle.at(bundle.wealth_surface, p, k) >= 0.0);
    }
  }
}

TEST_CASE("SDE wealth converges to the surface as steps refine") {
  auto policy = solve_bench();
  const int n_paths = 192;
  double prev_err = 1e300;
  std::vector<double> errs;
  for (int steps : {128, 256, 512, 1024}) {
    auto bundle =
        simulate_serial(policy, n_paths, steps, 31337, SimMode::draw_from_prior);
    double err = 0.0;
    for (int p = 0; p < n_paths; ++p)
      err += std::abs(bundle.at(bundle.wealth_sde, p, steps) -
                      bundle.at(bundle.wealth_surface, p, steps));
    err /= n_paths;
    errs.push_back(err);
    prev_err = err;
  }
  (void)prev_err;
  // O(sqrt(dt)) self-convergence: 8x more steps should cut the error by
  // at least 2 (theory: ~2.8)
  CHECK(errs.back() < errs.front() / 2.0);
  // and the finest error is small relative to the wealth scale
  CHECK(errs.back() < 0.25);
}

TEST_CASE("budget identity by terminal sampling") {
  auto policy = solve_bench();
  auto ms = budget_identity_mc(policy, 100000, 5, 2);
  CHECK(std::abs(ms.mean - policy.wealth()) <= 3.0 * ms.se);
  // determinism across jobs
  auto ms1 = budget_identity_mc(policy, 100000, 5, 1);
  CHECK(ms1.mean == ms.mean);
}

TEST_CASE("supermartingale checkpoints flat at the optimum") {
  auto policy = solve_bench();
  auto bundle = simulate(policy, 2000, 200, 99, SimMode::draw_from_prior, 0.0, 2);
  auto rep = supermartingale_check(bundle, policy,
                                   {0.0, 2.5, 5.0, 7.5, 10.0});
  REQUIRE(rep.discounted_value.size() == 5);
  // t = 0 checkpoint is exactly the initial wealth
  CHECK(rep.discounted_value[0].mean == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rep.discounted_value[0].se <= 1e-12);
  CHECK(rep.non_increasing_within_bands);
  CHECK(rep.flat_within_bands);
}

TEST_CASE("discounted SDE wealth is a supermartingale within bands") {
  // the Euler wealth with absorption at zero loses a little value at the
  // barrier, so its discounted density-weighted mean may only decrease
  auto policy = solve_bench();
  auto bundle = simulate(policy, 2000, 250, 123, SimMode::draw_from_prior, 0.0, 2);
  const auto& kernel = policy.kernel();
  double prev_mean = 1e300, prev_se = 0.0;
  for (int step : {0, 50, 125, 250}) {
    double t = bundle.times[step];
    double mean = 0.0, sumsq = 0.0;
    for (int p = 0; p < bundle.n_paths(); ++p) {
      double y = bundle.at(bundle.observation, p, step);
      double w = bundle.at(bundle.wealth_sde, p, step);
      double v = std::exp(-kMkt.rate * t - kernel.log_kernel(t, y)) * w;
      mean += v;
      sumsq += v * v;
    }
    mean /= bundle.n_paths();
    double se = std::sqrt((sumsq / bundle.n_paths() - mean * mean) /
                          (bundle.n_paths() - 1));
    if (prev_mean < 1e300)
      CHECK(mean <= prev_mean + 3.0 * std::hypot(se, prev_se));
    prev_mean = mean;
    prev_se = se;
  }
}

TEST_CASE("filter consistency on simulated paths") {
  auto policy = solve_bench();
  auto bundle = simulate(policy, 3000, 200, 2718, SimMode::draw_from_prior, 0.0, 2);
  auto rep = filter_consistency(bundle, policy);
  CHECK(std::abs(rep.regression_slope - 1.0) <= 3.0 * rep.slope_se);

  // The drift atoms are only |dtheta| sqrt(T) ~ 0.63 standard deviations
  // apart over this horizon, so full identification is rare. The exact
  // fraction with terminal mass > 0.9 on the drawn atom is Gaussian:
  //   drawn = upper: P(N > (log(9/4) + dm) / (dtheta sqrt(T)) - dtheta sqrt(T) ...)
  // computed directly below from the posterior odds and compared.
  const double t1 = 1.0 / 30.0, t2 = 7.0 / 30.0, T = 10.0;
  const double gap = (t2 - t1) * std::sqrt(T);
  const double drift_corr = 0.5 * (t2 * t2 - t1 * t1) * T;
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  // odds(upper) = 4 exp(dtheta*y - drift_corr) > 9 <=> standardized normal
  // threshold given the drawn atom's drift:
  double thr_hi = (std::log(9.0 / 4.0) + drift_corr) / (t2 - t1);
  double p_hi = 1.0 - Phi((thr_hi - t2 * T) / std::sqrt(T));
  double thr_lo = (std::log(4.0 * 9.0) - drift_corr) / (t2 - t1);
  double p_lo = Phi((-thr_lo - t1 * T) / std::sqrt(T));
  double expected = 0.8 * p_hi + 0.2 * p_lo;
  (void)gap;
  double se = std::sqrt(expected * (1.0 - expected) / bundle.n_paths());
  CHECK(std::abs(rep.concentration_fraction - expected) <= 3.0 * se + 1e-3);
}

TEST_CASE("filter on a point mass is constant") {
  auto env = EnvelopeSolution::solve(kBench, 0.5);
  FilterKernel kernel(DiscretePrior::point_mass(0.078), kMkt);
  auto policy = SolvedPolicy::solve(env, kernel, 10.0);
  auto bundle = simulate_serial(policy, 4, 100, 1, SimMode::fixed_drift, 0.078);
  double theta = 0.058 / 0.3;
  for (int p = 0; p < bundle.n_paths(); ++p)
    for (int k = 0; k <= bundle.n_steps; ++k)
      CHECK(bundle.at(bundle.posterior_mean, p, k) ==
            doctest::Approx(theta).epsilon(1e-13));
  // and at t = 0 the estimate is the prior mean on every bundle
  auto mixed = simulate_serial(solve_bench(), 4, 100, 1, SimMode::draw_from_prior);
  for (int p = 0; p < mixed.n_paths(); ++p)
    CHECK(mixed.at(mixed.posterior_mean, p, 0) ==
          doctest::Approx(0.19333333333333333).epsilon(1e-13));
}

TEST_CASE("simulate rejects bad arguments") {
  auto policy = solve_bench();
  CHECK_THROWS_AS(simulate_serial(policy, 0, 200, 1, SimMode::draw_from_prior),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_serial(policy, 10, 50, 1, SimMode::draw_from_prior),
                  std::invalid_argument);
}
