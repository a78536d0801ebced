#include <doctest.h>

#include <cmath>

#include "ambp/ambiguity.hpp"

using namespace ambp;

namespace {
DiscretePrior prior2(double p_low, double p_high) {
  return DiscretePrior{{0.03, 0.09}, {p_low, p_high}};
}
OuterProblem bench_problem() {
  return OuterProblem::from_config(ProblemConfig::defaults());
}
}  // namespace

TEST_CASE("rn derivative") {
  auto p = prior2(0.2, 0.8);
  auto same = rn_derivative(p, p);
  CHECK(same[0] == 1.0);
  CHECK(same[1] == 1.0);
  auto r = rn_derivative(prior2(0.4, 0.6), p);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(rn_derivative(DiscretePrior{{0.03, 0.09}, {0.0, 1.0}}, p),
                  ConfigError);
  CHECK_THROWS_AS(rn_derivative(DiscretePrior{{0.02, 0.09}, {0.5, 0.5}}, p),
                  ConfigError);
}

TEST_CASE("power penalty") {
  DiscretePrior p{{0.0, 1.0}, {0.5, 0.5}};
  DiscretePrior q{{0.0, 1.0}, {0.25, 0.75}};
  CHECK(penalty_power(p, p, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  // lambda = 1/2: exponents are -1 and 1, factor = E_p[p/q] = 4/3
  CHECK(penalty_power(q, p, 0.5) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // stays finite in the log domain where a naive moment overflows
  DiscretePrior far{{0.0, 1.0}, {0.999, 0.001}};
  CHECK(std::isfinite(penalty_power(far, p, 0.999)));
  // approaching ambiguity neutrality penalizes any fixed deviation harder
  double prev = penalty_power(q, p, 0.9);
  for (double lambda : {0.99, 0.999}) {
    double f = penalty_power(q, p, lambda);
    CHECK(f > prev);
    prev = f;
  }
  CHECK_THROWS_AS(penalty_power(q, p, 1.5), std::invalid_argument);
}

TEST_CASE("relative entropy penalty") {
  auto p = prior2(0.2, 0.8);
  CHECK(penalty_kl(p, p, 1.0) == 0.0);
  double kl = 0.5 * std::log(2.5) + 0.5 * std::log(0.625);
  CHECK(penalty_kl(prior2(0.5, 0.5), p, 1.0) ==
        doctest::Approx(kl).epsilon(1e-14));
  CHECK(kl == doctest::Approx(0.22314355131420976).epsilon(1e-12));
  // halving gamma doubles the penalty
  CHECK(penalty_kl(prior2(0.5, 0.5), p, 0.5) ==
        doctest::Approx(2.0 * kl).epsilon(1e-13));
  CHECK_THROWS_AS(penalty_kl(p, p, 0.0), std::invalid_argument);
}

TEST_CASE("log-aggregator factor") {
  DiscretePrior p{{0.0, 1.0}, {0.5, 0.5}};
  DiscretePrior q{{0.0, 1.0}, {0.25, 0.75}};
  CHECK(penalty_log_factor(p, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(penalty_log_factor(q, p) ==
        doctest::Approx(std::pow(0.75, -0.5)).epsilon(1e-14));
  // Jensen: always >= 1
  for (double w = 0.05; w < 1.0; w += 0.07)
    CHECK(penalty_log_factor(prior2(w, 1.0 - w), prior2(0.2, 0.8)) >= 1.0);
}

TEST_CASE("objective wiring per aggregator") {
  auto prob = bench_problem();
  auto env = make_envelope(prob);
  double v_base = solve_under_prior(prob, prob.base_prior, env).value();

  auto neutral =
      evaluate_objective(prob, AmbiguitySpec::neutral(), prob.base_prior, env);
  CHECK(neutral.objective == doctest::Approx(v_base).epsilon(1e-12));

  auto expo = evaluate_objective(prob, AmbiguitySpec::exponential(1.0),
                                 prob.base_prior, env);
  CHECK(expo.penalty == 0.0);
  CHECK(expo.objective == doctest::Approx(v_base).epsilon(1e-12));

  auto pow99 = evaluate_objective(prob, AmbiguitySpec::power(0.99),
                                  prob.base_prior, env);
  CHECK(pow99.penalty == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pow99.objective == doctest::Approx(v_base).epsilon(1e-10));

  // recombination: objective = value * penalty away from the base prior
  auto q = prior2(0.6, 0.4);
  auto ev = evaluate_objective(prob, AmbiguitySpec::power(0.7), q, env);
  CHECK(ev.objective ==
        doctest::Approx(std::max(ev.value, 0.0) * ev.penalty).epsilon(1e-13));
  auto ev2 = evaluate_objective(prob, AmbiguitySpec::exponential(2.0), q, env);
  CHECK(ev2.objective == doctest::Approx(ev2.value + ev2.penalty).epsilon(1e-13));
  // exponential objective dominates the value, equality only at the prior
  CHECK(ev2.objective > ev2.value);
}

TEST_CASE("worst case: optimizer sanity on the benchmark") {
  auto prob = bench_problem();
  auto spec = AmbiguitySpec::power(0.7);  // relative aversion 0.3
  auto wc = worst_case_prior(prob, spec, 2);
  // interior of the simplex
  CHECK(wc.q_star > prob.solver.simplex_eps);
  CHECK(wc.q_star < 1.0 - prob.solver.simplex_eps);
  // no worse than the undistorted prior
  auto env = make_envelope(prob);
  auto at_base = evaluate_objective(prob, spec, prob.base_prior, env);
  CHECK(wc.objective <= at_base.objective + 1e-12);
  // local optimality against nearby candidates
  for (double dq : {-0.05, -0.01, 0.01, 0.05}) {
    double q = wc.q_star + dq;
    if (q <= 0.0 || q >= 1.0) continue;
    auto ev = evaluate_objective(prob, spec, prior2(1.0 - q, q), env);
    CHECK(wc.objective <= ev.objective + 1e-10);
  }
  // refined optimum stays within one coarse-grid cell of the grid argmin
  double grid_best = 0.0, best_val = 1e300;
  for (const auto& [q, val] : wc.grid) {
    if (val < best_val) {
      best_val = val;
      grid_best = q;
    }
  }
  CHECK(std::abs(wc.q_star - grid_best) <= prob.solver.grid_step + 1e-12);
  // cross-implementation anchor
  CHECK(wc.q_star == doctest::Approx(0.77907).epsilon(5e-3));
}

TEST_CASE("worst case: neutrality limit approaches the base prior") {
  auto prob = bench_problem();
  double q_99 = worst_case_prior(prob, AmbiguitySpec::power(0.99), 2).q_star;
  double q_999 = worst_case_prior(prob, AmbiguitySpec::power(0.999), 2).q_star;
  CHECK(std::abs(q_999 - 0.8) < std::abs(q_99 - 0.8));
}

TEST_CASE("worst case: distortion deepens with aversion") {
  auto prob = bench_problem();
  double prev = 1.0;
  for (double raa : {0.01, 0.3, 1.2, 2.2}) {
    double q = worst_case_prior(prob, AmbiguitySpec::power(1.0 - raa), 2).q_star;
    CHECK(q < prev);
    prev = q;
  }
  prev = 1.0;
  for (double gamma : {0.01, 0.5, 2.0, 8.0}) {
    double q =
        worst_case_prior(prob, AmbiguitySpec::exponential(gamma), 2).q_star;
    CHECK(q < prev);
    prev = q;
  }
}

TEST_CASE("worst case: exponential benchmark anchor") {
  auto prob = bench_problem();
  auto wc = worst_case_prior(prob, AmbiguitySpec::exponential(1.0), 2);
  CHECK(wc.q_star == doctest::Approx(0.57659).epsilon(5e-3));
}

TEST_CASE("worst case: neutral and point-mass shortcuts") {
  auto prob = bench_problem();
  auto wc = worst_case_prior(prob, AmbiguitySpec::neutral(), 1);
  CHECK(wc.q_star == 0.8);
  CHECK(wc.evaluations == 1);
  prob.base_prior = DiscretePrior::point_mass(0.078);
  auto wp = worst_case_prior(prob, AmbiguitySpec::power(0.7), 1);
  CHECK(wp.prior_star.size() == 1);
}

TEST_CASE("worst case: three-atom fallback stays on the simplex") {
  auto prob = bench_problem();
  prob.base_prior = DiscretePrior{{0.03, 0.06, 0.09}, {0.2, 0.3, 0.5}};
  auto wc = worst_case_prior(prob, AmbiguitySpec::exponential(2.0), 1);
  double sum = 0.0;
  for (double w : wc.prior_star.weights) {
    CHECK(w >= prob.solver.simplex_eps * 0.999);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // distorts toward the low-drift atom
  CHECK(wc.prior_star.weights[0] > 0.2);
  CHECK(wc.prior_star.weights[2] < 0.5);
  auto env = make_envelope(prob);
  auto at_base =
      evaluate_objective(prob, AmbiguitySpec::exponential(2.0), prob.base_prior, env);
  CHECK(wc.objective <= at_base.objective + 1e-10);
}

TEST_CASE("objective memo keyed at 1e-6 resolution") {
  ObjectiveMemo memo;
  CHECK(!memo.find({0.2, 0.8}).has_value());
  memo.insert({0.2, 0.8}, 3.5);
  auto hit = memo.find({0.2 + 1e-9, 0.8 - 1e-9});
  REQUIRE(hit.has_value());
  CHECK(*hit == 3.5);
  CHECK(!memo.find({0.21, 0.79}).has_value());
}

TEST_CASE("solve summary wires the pipeline together") {
  ProblemConfig cfg = ProblemConfig::defaults();
  cfg.ambiguity = AmbiguitySpec::power(0.99);
  auto s = solve_summary(cfg, 2);
  CHECK(s.q_star > 0.0);
  CHECK(s.q_star < 1.0);
  CHECK(s.kappa_star > 0.0);
  CHECK(s.value > 0.0);
  REQUIRE(s.fraction_at_origin.has_value());
  CHECK(*s.fraction_at_origin > 0.0);
}
