#include "coadapt/marginals.hpp"

#include "coadapt/simulator.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>

namespace coadapt {

ChiSquareTest chi_square(std::string name, const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size()) throw UsageError("chi_square: size mismatch");
  ChiSquareTest t;
  t.name = std::move(name);
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw UsageError("chi_square: expected counts must be positive");
    const double diff = observed[i] - expected[i];
    t.statistic += diff * diff / expected[i];
  }
  t.dof = static_cast<int>(observed.size()) - 1;
  if (t.dof > 0) {
    boost::math::chi_squared_distribution<double> dist(t.dof);
    t.p_value = boost::math::cdf(boost::math::complement(dist, t.statistic));
  }
  t.p_adjusted = t.p_value;
  return t;
}

ChiSquareTest poisson_chi_square(std::string name, const std::vector<long>& samples, double mean) {
  if (samples.empty()) throw UsageError("poisson_chi_square: no samples");
  if (!(mean > 0.0)) throw UsageError("poisson_chi_square: mean must be > 0");
  const boost::math::poisson_distribution<double> dist(mean);
  const double N = static_cast<double>(samples.size());
  auto sf = [&](long k) { return boost::math::cdf(boost::math::complement(dist, static_cast<double>(k))); };

  // Bins [lo_b, lo_{b+1}); the last one is open-ended.
  std::vector<long> lo{0};
  std::vector<double> expected;
  double acc = 0.0;
  for (long k = 0; N * sf(k) >= 5.0; ++k) {
    acc += boost::math::pdf(dist, static_cast<double>(k));
    if (N * acc >= 5.0) {
      expected.push_back(N * acc);
      lo.push_back(k + 1);
      acc = 0.0;
    }
  }
  expected.push_back(N * (lo.back() == 0 ? 1.0 : sf(lo.back() - 1)));

  std::vector<double> observed(expected.size(), 0.0);
  for (long s : samples) {
    const auto it = std::upper_bound(lo.begin(), lo.end(), s);
    observed[static_cast<std::size_t>(it - lo.begin()) - 1] += 1.0;
  }
  return chi_square(std::move(name), observed, expected);
}

MarginalReport validate_marginals(StrategyId id, WalkParams params, double horizon, long replicates,
                                  std::uint64_t seed, double alpha, int workers) {
  if (!(horizon > 0.0)) throw UsageError("validate_marginals: horizon must be > 0");
  if (replicates < 100) throw UsageError("validate_marginals: replicates must be >= 100");
  const int n = params.n, d = params.d;
  const auto nn = static_cast<std::size_t>(n);
  const auto dd = static_cast<std::size_t>(d);

  struct Tally {
    std::vector<long> cx, cy;               // changes per coordinate
    std::vector<long> incx, incy;           // [i * d + increment]
    bool identical = true;
  };
  std::vector<Tally> tallies(static_cast<std::size_t>(replicates));
  parallel_for(replicates, workers, [&](long r) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
    Tally& tl = tallies[static_cast<std::size_t>(r)];
    tl.cx.assign(nn, 0);
    tl.cy.assign(nn, 0);
    tl.incx.assign(nn * dd, 0);
    tl.incy.assign(nn * dd, 0);
    const State x0(params);
    const State y0 = sample_uniform_state(params, rng);
    simulate_full(id, x0, y0, rng, horizon, false, [&](const FullEvent& e) {
      const bool xc = e.k != e.x_old, yc = e.l != e.y_old;
      if (xc) {
        ++tl.cx[static_cast<std::size_t>(e.i)];
        ++tl.incx[static_cast<std::size_t>(e.i * d + (e.k - e.x_old + d) % d)];
      }
      if (yc) {
        ++tl.cy[static_cast<std::size_t>(e.j)];
        ++tl.incy[static_cast<std::size_t>(e.j * d + (e.l - e.y_old + d) % d)];
      }
      if (xc != yc || (xc && e.i != e.j)) tl.identical = false;
    });
  });

  MarginalReport rep;
  rep.strategy = id;
  rep.params = params;
  rep.horizon = horizon;
  rep.replicates = replicates;
  rep.seed = seed;
  rep.alpha = alpha;
  rep.jump_times_identical = std::all_of(tallies.begin(), tallies.end(), [](const Tally& t) { return t.identical; });

  for (int chain = 0; chain < 2; ++chain) {
    const char* label = chain == 0 ? "X" : "Y";
    auto& means = chain == 0 ? rep.mean_changes_x : rep.mean_changes_y;
    for (int i = 0; i < n; ++i) {
      std::vector<long> counts;
      std::vector<double> inc(dd > 1 ? dd - 1 : 0, 0.0);
      for (const auto& t : tallies) {
        counts.push_back((chain == 0 ? t.cx : t.cy)[static_cast<std::size_t>(i)]);
        const auto& h = chain == 0 ? t.incx : t.incy;
        for (int k = 1; k < d; ++k) inc[static_cast<std::size_t>(k - 1)] += static_cast<double>(h[i * dd + k]);
      }
      double sum = 0.0;
      for (long c : counts) sum += static_cast<double>(c);
      means.push_back(sum / static_cast<double>(replicates));
      const std::string base = std::string(label) + " coord " + std::to_string(i);
      rep.tests.push_back(poisson_chi_square(base + " counts", counts, horizon));
      if (d > 2) {
        std::vector<double> expected(inc.size(), sum / (d - 1));
        rep.tests.push_back(chi_square(base + " increments", inc, expected));
      }
    }
  }
  const double m = static_cast<double>(rep.tests.size());
  rep.passed = true;
  for (auto& t : rep.tests) {
    t.p_adjusted = std::min(1.0, t.p_value * m);
    if (t.p_adjusted <= alpha) rep.passed = false;
  }
  return rep;
}

}  // namespace coadapt
