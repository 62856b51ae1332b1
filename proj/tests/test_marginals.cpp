#include "coadapt/marginals.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace coadapt;

TEST_CASE("pearson statistic and p-value") {
  const ChiSquareTest t = chi_square("die", {18, 22, 16, 25, 19, 20}, std::vector<double>(6, 20.0));
  CHECK(t.statistic == doctest::Approx((4 + 4 + 16 + 25 + 1 + 0) / 20.0));
  CHECK(t.dof == 5);
  // chi-square(5) survival at 2.5, from the closed form for odd dof
  const double x = 2.5;
  const double sf = std::erfc(std::sqrt(x / 2)) + std::sqrt(2 * x / M_PI) * std::exp(-x / 2) * (1 + x / 3);
  CHECK(t.p_value == doctest::Approx(sf).epsilon(1e-12));
  CHECK(t.p_adjusted == t.p_value);
  CHECK_THROWS_AS(chi_square("bad", {1, 2}, {1}), UsageError);
  CHECK_THROWS_AS(chi_square("bad", {1, 2}, {1, 0}), UsageError);
}

TEST_CASE("poisson goodness of fit") {
  std::mt19937_64 gen(123);
  std::poisson_distribution<long> pois(10.0), wrong(11.0);
  std::vector<long> good(20000), bad(20000);
  for (auto& s : good) s = pois(gen);
  for (auto& s : bad) s = wrong(gen);
  const ChiSquareTest g = poisson_chi_square("good", good, 10.0);
  const ChiSquareTest b = poisson_chi_square("bad", bad, 10.0);
  CHECK(g.p_value > 1e-3);
  CHECK(b.p_value < 1e-10);
  CHECK(g.dof >= 10);
  CHECK_THROWS_AS(poisson_chi_square("none", {}, 1.0), UsageError);
  CHECK_THROWS_AS(poisson_chi_square("zero", good, 0.0), UsageError);
}

TEST_CASE("every strategy has unit-rate marginals") {
  for (int d : {2, 3}) {
    for (StrategyId id : kAllStrategies) {
      CAPTURE(d);
      CAPTURE(strategy_name(id));
      const MarginalReport r = validate_marginals(id, WalkParams(d, 3), 5.0, 3000, 17);
      CHECK(r.passed);
      CHECK(r.tests.size() == (d == 2 ? 6u : 12u));
      for (const auto& t : r.tests) {
        CHECK(t.p_adjusted >= t.p_value);
        CHECK(t.p_adjusted <= 1.0);
      }
      for (double m : r.mean_changes_x) CHECK(std::abs(m - 5.0) < 5 * std::sqrt(5.0 / 3000));
      for (double m : r.mean_changes_y) CHECK(std::abs(m - 5.0) < 5 * std::sqrt(5.0 / 3000));
      CHECK(r.jump_times_identical == (id == StrategyId::Synchronous));
    }
  }
}

TEST_CASE("marginal validation is reproducible") {
  const MarginalReport a = validate_marginals(StrategyId::Optimal, WalkParams(4, 2), 3.0, 500, 8, 1e-3, 1);
  const MarginalReport b = validate_marginals(StrategyId::Optimal, WalkParams(4, 2), 3.0, 500, 8, 1e-3, 3);
  REQUIRE(a.tests.size() == b.tests.size());
  for (std::size_t i = 0; i < a.tests.size(); ++i) CHECK(a.tests[i].statistic == b.tests[i].statistic);
  CHECK_THROWS_AS(validate_marginals(StrategyId::Optimal, WalkParams(4, 2), 3.0, 50, 8), UsageError);
  CHECK_THROWS_AS(validate_marginals(StrategyId::Optimal, WalkParams(4, 2), 0.0, 500, 8), UsageError);
}
