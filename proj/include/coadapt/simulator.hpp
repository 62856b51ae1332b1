#pragma once

// Event-driven simulation of coupled walks.
//
// The lumped simulator runs the unmatched count N directly: holding times are
// exponential with the strategy's total exit rate at the current level and the
// jump size is drawn proportionally to the rates. The full-coordinate
// simulator drives explicit states with the strategy's control matrix.

#include "coadapt/state.hpp"
#include "coadapt/strategies.hpp"
#include "coadapt/survival_curve.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace coadapt {

struct ReplicateResult {
  /// Coupling time, +infinity when censored at t_max.
  double tau = 0.0;
  long n_jumps = 0;
  std::uint64_t seed = 0;
  bool censored = false;
};

struct PathPoint {
  double t;
  int level;
};

/// Lumped-rate table for levels 0..m_max.
class LumpedRates {
 public:
  LumpedRates(StrategyId id, int d, int m_max);
  StrategyId strategy() const { return id_; }
  int d() const { return d_; }
  int m_max() const { return static_cast<int>(rates_.size()) - 1; }
  const RealRateSchedule& at(int m) const { return rates_[static_cast<std::size_t>(m)]; }
  double exit(int m) const { return exit_[static_cast<std::size_t>(m)]; }

 private:
  StrategyId id_;
  int d_;
  std::vector<RealRateSchedule> rates_;
  std::vector<double> exit_;
};

/// One lumped replicate from level m0 with the given generator. When `path`
/// is non-null every visited (time, level) pair is appended, starting at (0, m0).
ReplicateResult simulate_lumped(const LumpedRates& rates, int m0, Rng& rng, double t_max,
                                std::vector<PathPoint>* path = nullptr);

/// Replicate 0 of stream `seed`: the same draw estimate_survival makes first.
ReplicateResult simulate_coupling(StrategyId id, const State& x0, const State& y0, std::uint64_t seed, double t_max,
                                  std::vector<PathPoint>* path = nullptr);

/// One event of the full-coordinate construction: the (i,k)(j,l) stream
/// fired, setting X(i) = k and Y(j) = l.
struct FullEvent {
  double t;
  int i, k, j, l;
  int x_old;  // X(i) before the event
  int y_old;  // Y(j) before the event
};
using FullObserver = std::function<void(const FullEvent&)>;

/// Full-coordinate run on [0, t_max]. Events fire at total rate nd/(d-1); the
/// row is uniform and the column is drawn from the control matrix row.
ReplicateResult simulate_full(StrategyId id, const State& x0, const State& y0, Rng& rng, double t_max,
                              bool stop_at_coupling, const FullObserver& observer = {});

/// Full-coordinate replicate: explicit X and Y driven by the control matrix.
ReplicateResult simulate_coupling_full(StrategyId id, const State& x0, const State& y0, std::uint64_t seed,
                                       double t_max);

/// Worker count: COADAPT_WORKERS if set and positive, else the hardware concurrency.
int default_workers();

/// Run body(i) for i in [0, count) on `workers` threads. Each index is run
/// exactly once; callers reduce per-index results in index order.
void parallel_for(long count, int workers, const std::function<void(long)>& body);

/// Empirical P(tau > t) from `replicates` lumped replicates; replicate i uses
/// make_stream(seed, i), so the result does not depend on `workers`.
SurvivalCurve estimate_survival(StrategyId id, int d, int m0, std::span<const double> t_grid, long replicates,
                                std::uint64_t seed, int workers = 0);
SurvivalCurve estimate_survival(StrategyId id, const State& x0, const State& y0, std::span<const double> t_grid,
                                long replicates, std::uint64_t seed, int workers = 0);

/// 1.96 and 3 sigma Wald half-widths.
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ3 = 3.0;

}  // namespace coadapt
