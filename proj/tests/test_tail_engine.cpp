#include "coadapt/tail_engine.hpp"

#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace coadapt;

namespace {

std::vector<double> linear_grid(double a, double b, int points) {
  std::vector<double> t;
  for (int i = 0; i < points; ++i) t.push_back(a + (b - a) * i / (points - 1));
  return t;
}

double v1(int d, double t) { return std::exp(-d * t / (d - 1.0)); }

// v(2, t) = P(first jump after t) + P(first jump at s to level 1, then level 1 survives t - s).
double v2_quadrature(int d, double t) {
  const double p1 = (d - 2.0) / (d - 1.0);
  auto integrand = [&](double s) { return 2.0 * std::exp(-2.0 * s) * p1 * v1(d, t - s); };
  const double conv = t == 0.0 ? 0.0 : boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, t, 15, 1e-15);
  return std::exp(-2.0 * t) + conv;
}

// Backward equations of the lumped chain integrated with an adaptive Runge-Kutta scheme.
std::vector<std::vector<double>> ode_tails(StrategyId id, int d, int m_max, const std::vector<double>& grid) {
  std::vector<RealRateSchedule> rates;
  for (int m = 0; m <= m_max; ++m) rates.push_back(to_real(strategy_rates(id, m, d)));
  using Vec = std::vector<double>;
  auto rhs = [&](const Vec& v, Vec& dv, double) {
    dv.assign(v.size(), 0.0);
    for (int m = 1; m <= m_max; ++m)
      for (int s : {-2, -1}) {
        const double l = rates[static_cast<std::size_t>(m)](s);
        if (l > 0.0) dv[static_cast<std::size_t>(m)] += l * (v[static_cast<std::size_t>(m + s)] - v[static_cast<std::size_t>(m)]);
      }
  };
  Vec v(static_cast<std::size_t>(m_max) + 1, 1.0);
  v[0] = 0.0;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m_max) + 1);
  auto observe = [&](const Vec& x, double) {
    for (std::size_t m = 0; m < x.size(); ++m) out[m].push_back(x[m]);
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_times(ode::make_dense_output(1e-14, 1e-14, ode::runge_kutta_dopri5<Vec>()), rhs, v, grid.begin(),
                       grid.end(), 1e-3, observe);
  return out;
}

}  // namespace

TEST_CASE("level one and level two closed forms") {
  const auto grid = linear_grid(0.0, 10.0, 50);
  for (int d : {2, 3, 4, 10}) {
    const TailTable tab = survival_exact(d, 2, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double t = grid[j];
      CHECK(std::abs(tab.v(1, j) - v1(d, t)) <= 1e-10);
      const double closed = 2.0 * v1(d, t) - std::exp(-2.0 * t);
      CHECK(std::abs(v2_quadrature(d, t) - closed) <= 1e-12);
      CHECK(std::abs(tab.v(2, j) - closed) <= 1e-8);
    }
  }
}

TEST_CASE("uniformization agrees with the backward equations") {
  const auto grid = linear_grid(0.0, 8.0, 17);
  for (StrategyId id : {StrategyId::Optimal, StrategyId::Independent, StrategyId::PairwiseClassic}) {
    for (int d : {2, 3, 4, 10}) {
      CAPTURE(d);
      const TailTable tab = survival_exact(d, 12, grid, 1e-12, id);
      const auto ode = ode_tails(id, d, 12, grid);
      for (int m = 0; m <= 12; ++m)
        for (std::size_t j = 0; j < grid.size(); ++j)
          CHECK(std::abs(tab.v(m, j) - ode[static_cast<std::size_t>(m)][j]) <= 1e-10);
    }
  }
}

TEST_CASE("tail table invariants") {
  std::vector<double> grid{0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0};
  for (int d : {2, 3, 5, 10}) {
    const TailTable tab = survival_exact(d, 40, grid);
    CHECK(tab.max_error() <= 1e-12);
    CHECK(tab.v(0, 0) == 0.0);
    for (int m = 0; m <= 40; ++m) {
      if (m > 0) CHECK(tab.v(m, 0) == 1.0);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(tab.v(m, j) >= 0.0);
        CHECK(tab.v(m, j) <= 1.0);
        CHECK(std::abs(tab.v(m, j) + tab.F(m, j) - 1.0) <= tab.err_v(m, j) + tab.err_F(m, j) + 1e-15);
        if (j > 0) CHECK(tab.v(m, j) <= tab.v(m, j - 1) + tab.error(m, j));
        if (m > 0) CHECK(tab.v(m, j) + tab.error(m, j) + tab.error(m - 1, j) >= tab.v(m - 1, j));
      }
    }
  }
}

TEST_CASE("generator and error handling") {
  const LumpedGenerator g = make_generator(4, 6);
  mpq_class top = 0;
  for (int m = 0; m <= 6; ++m) top = std::max(top, optimal_rates(m, 4).total_exit());
  CHECK(g.uniform_rate == top);
  CHECK(g.uniform_rate == 6);
  for (int m = 0; m <= 6; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    CHECK(g.p_stay[mi] + g.p_down1[mi] + g.p_down2[mi] == doctest::Approx(1.0).epsilon(1e-15));
  }
  const double t[] = {1.0};
  CHECK_THROWS_AS(survival_exact(4, 6, t, 1e-20), std::runtime_error);
  const double bad[] = {-1.0};
  CHECK_THROWS_AS(survival_exact(4, 6, bad), UsageError);
  CHECK(survival_exact(2, 1, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("sign certification") {
  CHECK(certify(1.0, 0.1, false) == Sign::Positive);
  CHECK(certify(-1.0, 0.1, false) == Sign::Negative);
  CHECK(certify(0.15, 0.1, false) == Sign::Undetermined);
  CHECK(certify(0.0, 0.0, false) == Sign::Undetermined);
  CHECK(certify(0.3, 0.1, true) == Sign::Zero);
  CHECK(sign_name(Sign::Zero) == "zero");
}

TEST_CASE("increment table signs") {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.01 * std::pow(1000.0, i / 19.0));
  SUBCASE("d = 4: positive increments, nonincreasing, one exact zero row") {
    const RDiffTable rd = r_diff_table(4, 20, grid);
    CHECK(rd.count(false, Sign::Positive) == 20 * 20);
    CHECK(rd.count(true, Sign::Zero) == 20);
    CHECK(rd.count(true, Sign::Positive) == 19 * 20 - 20);
    for (const auto& c : rd.diff[3]) CHECK(c.sign == Sign::Zero);
  }
  SUBCASE("d = 2: level two never moves closer than level one") {
    const RDiffTable rd = r_diff_table(2, 6, grid);
    for (const auto& c : rd.r[2]) CHECK(c.sign == Sign::Zero);
    CHECK(rd.count(false, Sign::Undetermined) == 0);
  }
  SUBCASE("tables of other strategies are rejected") {
    const TailTable tab = survival_exact(4, 4, grid, 1e-12, StrategyId::Independent);
    CHECK_THROWS_AS(r_diff_table(tab), UsageError);
  }
}
