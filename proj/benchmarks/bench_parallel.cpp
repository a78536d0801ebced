// Timing comparison of the serial reference loops against their OpenMP
// counterparts: path simulation, the budget Monte Carlo sampler, and the
// aversion-table sweep. Run with no arguments; prints one line per case.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "ambp/experiments.hpp"

namespace {

template <typename F>
double time_s(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  using namespace ambp;
  ProblemConfig cfg = ProblemConfig::defaults();
  cfg.ambiguity = AmbiguitySpec::power(0.7);
  cfg.validate_or_throw();
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n\n", threads);

  OuterProblem prob = OuterProblem::from_config(cfg);
  EnvelopeSolution env = make_envelope(prob);
  SolvedPolicy policy = solve_under_prior(prob, cfg.prior, env);

  {
    const int paths = 4000, steps = 500;
    PathBundle serial_bundle, parallel_bundle;
    double ts = time_s([&] {
      serial_bundle = simulate_serial(policy, paths, steps, 7, SimMode::draw_from_prior);
    });
    double tp = time_s([&] {
      parallel_bundle = simulate(policy, paths, steps, 7, SimMode::draw_from_prior);
    });
    bool same = serial_bundle.wealth_sde == parallel_bundle.wealth_sde &&
                serial_bundle.observation == parallel_bundle.observation;
    std::printf("path simulation   %5d paths: serial %7.3fs  openmp %7.3fs  speedup %.2fx  identical=%s\n",
                paths, ts, tp, ts / tp, same ? "yes" : "NO");
  }
  {
    const int draws = 2000000;
    MeanSE ms, mp;
    double ts = time_s([&] { ms = budget_identity_mc(policy, draws, 11, 1); });
    double tp = time_s([&] { mp = budget_identity_mc(policy, draws, 11, 0); });
    std::printf("budget sampler  %7d draws: serial %7.3fs  openmp %7.3fs  speedup %.2fx  identical=%s\n",
                draws, ts, tp, ts / tp,
                ms.mean == mp.mean ? "yes" : "NO");
  }
  {
    std::vector<double> levels = {0.01, 0.1, 0.3, 0.7, 1.2, 2.2};
    Dataset ds, dp;
    double ts = time_s([&] { ds = table_raa_serial(cfg, levels); });
    double tp = time_s([&] { dp = table_raa(cfg, levels, 0); });
    std::printf("aversion sweep  %7zu rows:  serial %7.3fs  openmp %7.3fs  speedup %.2fx  identical=%s\n",
                levels.size(), ts, tp, ts / tp,
                ds.rows == dp.rows ? "yes" : "NO");
  }
  return 0;
}
