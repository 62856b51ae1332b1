#include "coadapt/strategies.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace coadapt;

namespace {

std::vector<State> all_states(WalkParams p) {
  std::vector<State> out;
  const int size = static_cast<int>(std::pow(p.d, p.n));
  for (int code = 0; code < size; ++code) {
    std::vector<int> c(static_cast<std::size_t>(p.n));
    int rest = code;
    for (auto& v : c) {
      v = rest % p.d;
      rest /= p.d;
    }
    out.emplace_back(p, c);
  }
  return out;
}

// Rates of N by firing every (i,k)(j,l) stream on copies of the states.
RealRateSchedule four_sum(const QMatrix& q, const State& x, const State& y) {
  const WalkParams& p = x.params();
  const int before = hamming(x, y);
  RealRateSchedule r;
  for (int i = 0; i < p.n; ++i)
    for (int k = 0; k < p.d; ++k)
      for (int j = 0; j < p.n; ++j)
        for (int l = 0; l < p.d; ++l) {
          const double w = q.at(i, k, j, l);
          if (w == 0.0) continue;
          State x2 = x, y2 = y;
          x2.set(i, k);
          y2.set(j, l);
          const int s = hamming(x2, y2) - before;
          if (s != 0) r(s) += w / (p.d - 1);
        }
  return r;
}

bool close(const RealRateSchedule& a, const RealRateSchedule& b, double tol = 1e-12) {
  for (std::size_t i = 0; i < 5; ++i)
    if (std::abs(a.lam[i] - b.lam[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (StrategyId id : kAllStrategies) CHECK(parse_strategy(strategy_name(id)) == id);
  CHECK_THROWS_AS(parse_strategy("greedy"), UsageError);
}

TEST_CASE("regime follows the odd-level threshold") {
  for (int d = 2; d <= 12; ++d) {
    CHECK(regime(0, d) == Regime::Absorbed);
    for (int m = 1; m <= 40; ++m) {
      const double bound = d == 2 ? INFINITY : 2.0 * (d - 1) / (d - 2);
      const Regime want = (m % 2 == 1 && m < bound) ? Regime::C3 : Regime::C2;
      CHECK(regime(m, d) == want);
    }
  }
  CHECK(regime(3, 3) == Regime::C3);
  CHECK(regime(5, 3) == Regime::C2);
  CHECK(regime(3, 4) == Regime::C2);
  CHECK(regime(1, 10) == Regime::C3);
  CHECK(regime(3, 10) == Regime::C2);
}

TEST_CASE("optimal rates saturate the single-move budget") {
  for (int d = 2; d <= 12; ++d) {
    for (int m = 0; m <= 30; ++m) {
      const RateSchedule r = optimal_rates(m, d);
      CHECK(in_constraint_set(r, m, d));
      CHECK((d - 1) * (r(-1) + 2 * r(-2)) == mpq_class(m * d));
      CHECK(r(1) == 0);
      CHECK(r(2) == 0);
      if (regime(m, d) == Regime::C2) CHECK((d - 1) * r(-2) == m);
      if (regime(m, d) == Regime::C3) CHECK(r(-2) == 0);
    }
  }
  const RateSchedule r = optimal_rates(4, 5);
  CHECK(r(-2) == 1);
  CHECK(r(-1) == 3);
}

TEST_CASE("competitor rates lie in the constraint set") {
  for (int d = 2; d <= 8; ++d)
    for (int m = 0; m <= 20; ++m)
      for (StrategyId id : {StrategyId::Independent, StrategyId::Synchronous, StrategyId::PairwiseClassic})
        CHECK(in_constraint_set(competitor_rates(id, m, d), m, d));
  CHECK_THROWS_AS(competitor_rates(StrategyId::Optimal, 2, 3), UsageError);
}

TEST_CASE("real constraint check matches the exact one") {
  Rng rng = make_stream(11, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 6), m = static_cast<int>(rng() % 8);
    RateSchedule r;
    r(-1) = mpq_class(static_cast<long>(rng() % 40), 4);
    r(-2) = mpq_class(static_cast<long>(rng() % 20), 4);
    CHECK(in_constraint_set(r, m, d) == in_constraint_set(to_real(r), m, d, 0.0));
  }
}

TEST_CASE("control matrices are doubly stochastic and lump to the scheduled rates") {
  for (int d : {2, 3, 4}) {
    for (int n : {1, 2, 3}) {
      if (d == 4 && n == 3) continue;
      const WalkParams p(d, n);
      const auto states = all_states(p);
      for (const State& x : states) {
        for (const State& y : states) {
          const PairConfig cfg = partition(x, y);
          const int m = cfg.m();
          for (StrategyId id : kAllStrategies) {
            CAPTURE(d);
            CAPTURE(n);
            CAPTURE(m);
            CAPTURE(strategy_name(id));
            const QMatrix q = build_q_matrix(id, cfg);
            REQUIRE(q.doubly_stochastic());
            const RealRateSchedule lumped = lump_rates(q, cfg);
            CHECK(close(lumped, four_sum(q, x, y)));
            const bool no_realisation =
                d == 3 && n == 1 && m == 1 && (id == StrategyId::Independent || id == StrategyId::PairwiseClassic);
            if (!no_realisation) CHECK(close(lumped, to_real(strategy_rates(id, m, d))));
          }
        }
      }
    }
  }
}

TEST_CASE("optimal matrix clauses") {
  const WalkParams p(4, 3);
  const PairConfig one = partition(State(p), State::unit(p, 0));
  CHECK_THROWS_AS(build_optimal_q(one, Regime::C2), UsageError);
  CHECK_THROWS_AS(build_optimal_q(one, Regime::Absorbed), UsageError);
  const PairConfig two = partition(State(p), State(p, {1, 2, 0}));
  for (Regime c : {Regime::C2, Regime::C3}) {
    const QMatrix q = build_optimal_q(two, c);
    CHECK(q.doubly_stochastic());
    const RealRateSchedule r = lump_rates(q, two);
    if (c == Regime::C3) {
      CHECK(r(-1) == doctest::Approx(2.0 * 4 / 3));
      CHECK(r(-2) == 0.0);
    } else {
      CHECK(r(-2) == doctest::Approx(2.0 / 3));
      CHECK(r(-1) == doctest::Approx(2.0 * 2 / 3));
    }
  }
  CHECK(QMatrix::identity(p).doubly_stochastic());
}
