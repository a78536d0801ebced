#include <doctest.h>

#include "ambp/config.hpp"

using namespace ambp;

TEST_CASE("market price of risk") {
  MarketParams m{0.02, 0.3, 10.0};
  CHECK(market_price_of_risk(0.078, m) == doctest::Approx(0.19333333333333333).epsilon(1e-12));
  CHECK(market_price_of_risk(m.rate, m) == 0.0);
  CHECK(market_price_of_risk(0.03, m) == doctest::Approx(1.0 / 30.0).epsilon(1e-12));
}

TEST_CASE("market price of risk strictly increasing in z") {
  MarketParams m{0.02, 0.3, 10.0};
  double prev = market_price_of_risk(-0.5, m);
  for (int i = 1; i <= 100; ++i) {
    double z = -0.5 + i * 0.013;
    double th = market_price_of_risk(z, m);
    CHECK(th > prev);
    prev = th;
  }
}

TEST_CASE("default config is the benchmark set and validates") {
  ProblemConfig cfg = ProblemConfig::defaults();
  CHECK_NOTHROW(cfg.validate_or_throw());
  CHECK(cfg.market.rate == 0.02);
  CHECK(cfg.prior.upper_prob() == 0.8);
  double sum = 0.0;
  for (double p : cfg.prior.weights) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("duplicate prior atoms rejected") {
  ProblemConfig cfg = ProblemConfig::defaults();
  cfg.prior = DiscretePrior{{0.05, 0.05}, {0.5, 0.5}};
  CHECK_THROWS_AS(cfg.validate_or_throw(), ConfigError);
  try {
    cfg.validate_or_throw();
  } catch (const ConfigError& e) {
    bool found = false;
    for (const auto& issue : e.issues())
      if (issue.find("duplicate atoms") != std::string::npos) found = true;
    CHECK(found);
  }
}

TEST_CASE("power aggregator requires positive utility") {
  ProblemConfig cfg = ProblemConfig::defaults();
  cfg.ambiguity = AmbiguitySpec::power(0.5);
  cfg.risk.alpha = -1.0;
  CHECK_THROWS_AS(cfg.validate_or_throw(), ConfigError);
  try {
    cfg.validate_or_throw();
  } catch (const ConfigError& e) {
    bool found = false;
    for (const auto& issue : e.issues())
      if (issue.find("positive utility") != std::string::npos) found = true;
    CHECK(found);
  }
  // exponential aggregator has no such restriction
  cfg.ambiguity = AmbiguitySpec::exponential(1.0);
  CHECK_NOTHROW(cfg.validate_or_throw());
}

TEST_CASE("zero-probability atom rejected") {
  std::vector<std::string> issues;
  validate(DiscretePrior{{0.03, 0.09}, {0.0, 1.0}}, issues);
  CHECK(!issues.empty());
}

TEST_CASE("linear mode forces the identity payoff") {
  std::vector<std::string> issues;
  Contract c{0.2, 1.0, 0.02, true};
  validate(c, issues);
  CHECK(!issues.empty());
  issues.clear();
  validate(Contract::linear_payoff(), issues);
  CHECK(issues.empty());
}

TEST_CASE("config round-trips bit for bit") {
  ProblemConfig cfg = ProblemConfig::defaults();
  cfg.market.rate = 0.017345203945872346;
  cfg.market.sigma = 1.0 / 3.0;
  cfg.wealth = 12.000000000000153;
  cfg.prior = DiscretePrior{{0.031234567890123455, 0.09}, {0.2, 0.8}};
  cfg.ambiguity = AmbiguitySpec::power(0.9871234567891234);
  std::string text = serialize_config(cfg);
  ProblemConfig back = parse_config(text);
  CHECK(back.market.rate == cfg.market.rate);
  CHECK(back.market.sigma == cfg.market.sigma);
  CHECK(back.wealth == cfg.wealth);
  CHECK(back.prior.drifts == cfg.prior.drifts);
  CHECK(back.prior.weights == cfg.prior.weights);
  CHECK(back.ambiguity.lambda == cfg.ambiguity.lambda);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("unknown keys are reported with field names") {
  CHECK_THROWS_AS(parse_config("[market]\nrr = 0.02\n"), ConfigError);
  try {
    parse_config("[market]\nrr = 0.02\nsigma = -3\n");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() >= 1);
    CHECK(e.issues()[0].find("market.rr") != std::string::npos);
  }
}
