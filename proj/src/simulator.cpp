#include "coadapt/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace coadapt {

LumpedRates::LumpedRates(StrategyId id, int d, int m_max) : id_(id), d_(d) {
  if (m_max < 0) throw UsageError("LumpedRates: m_max must be >= 0");
  for (int m = 0; m <= m_max; ++m) {
    RealRateSchedule r = to_real(strategy_rates(id, m, d));
    rates_.push_back(r);
    exit_.push_back(r(-2) + r(-1) + r(1) + r(2));
  }
}

ReplicateResult simulate_lumped(const LumpedRates& rates, int m0, Rng& rng, double t_max,
                                std::vector<PathPoint>* path) {
  if (!(t_max > 0.0)) throw UsageError("simulate: t_max must be > 0");
  if (m0 < 0 || m0 > rates.m_max()) throw UsageError("simulate: start level outside the rate table");
  ReplicateResult res;
  int m = m0;
  double t = 0.0;
  if (path) path->push_back({0.0, m});
  while (m > 0) {
    const double exit = rates.exit(m);
    if (exit <= 0.0) {
      res.censored = true;
      break;
    }
    t += exponential(rng, exit);
    if (t > t_max) {
      res.censored = true;
      break;
    }
    const RealRateSchedule& r = rates.at(m);
    double u = uniform01(rng) * exit;
    int s = 0;
    for (int cand : {-2, -1, 1, 2}) {
      if (r(cand) <= 0.0) continue;
      s = cand;
      if (u < r(cand)) break;
      u -= r(cand);
    }
    m += s;
    if (m > rates.m_max()) throw std::logic_error("simulate: level left the rate table");
    ++res.n_jumps;
    if (path) path->push_back({t, m});
  }
  res.tau = res.censored ? std::numeric_limits<double>::infinity() : t;
  return res;
}

ReplicateResult simulate_coupling(StrategyId id, const State& x0, const State& y0, std::uint64_t seed, double t_max,
                                  std::vector<PathPoint>* path) {
  const int m0 = hamming(x0, y0);
  LumpedRates rates(id, x0.params().d, m0);
  Rng rng = make_stream(seed, 0);
  ReplicateResult r = simulate_lumped(rates, m0, rng, t_max, path);
  r.seed = seed;
  return r;
}

ReplicateResult simulate_full(StrategyId id, const State& x0, const State& y0, Rng& rng, double t_max,
                              bool stop_at_coupling, const FullObserver& observer) {
  if (!(t_max > 0.0)) throw UsageError("simulate: t_max must be > 0");
  const WalkParams p = x0.params();
  const int dim = p.n * p.d;
  const double total_rate = static_cast<double>(dim) / (p.d - 1);
  State x = x0, y = y0;
  PairConfig cfg = partition(x, y);
  QMatrix q = build_q_matrix(id, cfg);
  ReplicateResult res;
  double t = 0.0;
  bool coupled = cfg.m() == 0;
  if (coupled && stop_at_coupling) return res;
  for (;;) {
    t += exponential(rng, total_rate);
    if (t > t_max) break;
    const int row = std::min(dim - 1, static_cast<int>(uniform01(rng) * dim));
    double u = uniform01(rng);
    int col = -1;
    for (int c = 0; c < dim; ++c) {
      const double w = q(row, c);
      if (w <= 0.0) continue;
      col = c;
      if (u < w) break;
      u -= w;
    }
    const int i = row / p.d, k = row % p.d, j = col / p.d, l = col % p.d;
    const FullEvent ev{t, i, k, j, l, x[i], y[j]};
    if (observer) observer(ev);
    if (ev.x_old == k && ev.y_old == l) continue;
    x.set(i, k);
    y.set(j, l);
    ++res.n_jumps;
    cfg = partition(x, y);
    if (cfg.m() == 0 && !coupled) {
      coupled = true;
      res.tau = t;
      if (stop_at_coupling) return res;
    }
    if (cfg.m() > 0) coupled = false;
    q = build_q_matrix(id, cfg);
  }
  if (!coupled) {
    res.censored = true;
    res.tau = std::numeric_limits<double>::infinity();
  }
  return res;
}

ReplicateResult simulate_coupling_full(StrategyId id, const State& x0, const State& y0, std::uint64_t seed,
                                       double t_max) {
  Rng rng = make_stream(seed, 0);
  ReplicateResult r = simulate_full(id, x0, y0, rng, t_max, true);
  r.seed = seed;
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("COADAPT_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(long count, int workers, const std::function<void(long)>& body) {
  if (workers <= 0) workers = default_workers();
  workers = static_cast<int>(std::min<long>(workers, std::max<long>(1, count)));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  constexpr long kChunk = 256;
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const long begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const long end = std::min(count, begin + kChunk);
      try {
        for (long i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

SurvivalCurve estimate_survival(StrategyId id, int d, int m0, std::span<const double> t_grid, long replicates,
                                std::uint64_t seed, int workers) {
  if (t_grid.empty()) throw UsageError("estimate_survival: empty time grid");
  if (replicates < 100) throw UsageError("estimate_survival: replicates must be >= 100");
  if (m0 < 0) throw UsageError("estimate_survival: m0 must be >= 0");
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    if (!(t_grid[j] >= 0.0) || !std::isfinite(t_grid[j])) throw UsageError("estimate_survival: bad time");
    if (j > 0 && t_grid[j] < t_grid[j - 1]) throw UsageError("estimate_survival: grid must be increasing");
  }
  const LumpedRates rates(id, d, m0);
  const double t_max = std::max(t_grid.back(), 1e-300);
  std::vector<double> tau(static_cast<std::size_t>(replicates));
  parallel_for(replicates, workers, [&](long r) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
    tau[static_cast<std::size_t>(r)] = simulate_lumped(rates, m0, rng, t_max).tau;
  });

  SurvivalCurve c;
  c.kind = CurveKind::Empirical;
  c.replicates = replicates;
  c.t_grid.assign(t_grid.begin(), t_grid.end());
  for (double t : t_grid) {
    long alive = 0;
    for (double x : tau) alive += x > t;
    const double p = static_cast<double>(alive) / static_cast<double>(replicates);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
    c.value.push_back(p);
    c.half_width_95.push_back(kZ95 * se);
    c.half_width_3sigma.push_back(kZ3 * se);
  }
  return c;
}

SurvivalCurve estimate_survival(StrategyId id, const State& x0, const State& y0, std::span<const double> t_grid,
                                long replicates, std::uint64_t seed, int workers) {
  return estimate_survival(id, x0.params().d, hamming(x0, y0), t_grid, replicates, seed, workers);
}

}  // namespace coadapt
