#pragma once

// Pointwise optimality of the coupling's rate schedule: the linear program
//   maximize  lam(-1) r(m) + lam(-2) [r(m) + r(m-1)]
//   over      lam >= 0, (d-1)(lam(-1) + 2 lam(-2)) <= md, (d-1) lam(-2) <= m
// solved by vertex enumeration, plus Monte Carlo dominance against competitors.

#include "coadapt/simulator.hpp"
#include "coadapt/strategies.hpp"
#include "coadapt/tail_engine.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coadapt {

enum class Vertex { Origin, AllSingle, Cap, DoubleOnly };
std::string_view vertex_name(Vertex v);

struct FeasibleMax {
  RateSchedule lambda;
  Vertex vertex = Vertex::Origin;
  double objective = 0.0;
  /// Cap and all-single objectives agree within the tie tolerance.
  bool tied = false;
  /// r(m) < 0 was supplied.
  bool negative_r = false;
};

/// Vertex maximizer. Objectives within tie_tol of the best count as ties and
/// resolve to the cap vertex. Level 1 admits no double matches.
FeasibleMax feasible_max(int d, int m, double r_m, double r_m_minus_1, double tie_tol = 0.0);

/// sum_s lam(s) [v(m) - v(m+s)] from a tail table (levels up to m+2 as needed).
double bellman_objective(const RealRateSchedule& lam, int m, const TailTable& tab, std::size_t j);

struct BellmanGap {
  double gap = 0.0;    // objective(lam) - objective(optimal)
  double slack = 0.0;  // certified numerical error of gap
};

/// Down rates must lie in the constraint set and vanish where m + s < 0; up
/// rates are free and nonnegative. Throws UsageError otherwise.
void check_feasible(const RealRateSchedule& lam, int m, int d);

BellmanGap bellman_gap(int m, const RealRateSchedule& lam, const TailTable& tab, std::size_t j);
BellmanGap bellman_gap(int d, int m, double t, const RealRateSchedule& lam, double eps = 1e-12);

/// Uniform draw from the down-rate polytope by rejection from its bounding box.
RealRateSchedule sample_feasible(int d, int m, Rng& rng);
/// The polytope's vertices as real schedules.
std::vector<RealRateSchedule> feasible_vertices(int d, int m);

struct DominanceCell {
  double t = 0.0;
  double empirical = 0.0;
  double half_width_3sigma = 0.0;
  double exact = 0.0;
  /// One-sided 3 sigma margin, taken at the exact value.
  double margin = 0.0;
  bool violation = false;
};

struct DominanceReport {
  int d = 2;
  int m0 = 0;
  StrategyId competitor = StrategyId::Independent;
  long replicates = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  std::vector<DominanceCell> cells;
  int violations = 0;
};

/// Flags t where P(tau_c > t) + 3 sigma < v(m0, t) - eps.
DominanceReport dominance_test(int d, int m0, StrategyId competitor, std::span<const double> t_grid, long replicates,
                               std::uint64_t seed, double eps = 1e-12, int workers = 0);

enum class CellStatus { Match, Tie, Violation };
std::string_view status_name(CellStatus s);

struct VerifyCell {
  int m = 0;
  double t = 0.0;
  CellStatus status = CellStatus::Match;
  bool tied = false;
  Vertex vertex = Vertex::Origin;
  double objective = 0.0;
  double r_m = 0.0;
  double r_m_minus_1 = 0.0;
  Sign diff_sign = Sign::Undetermined;
  /// Largest sampled bellman gap and its slack.
  double max_gap = 0.0;
  double gap_slack = 0.0;
};

struct VerifyOptions {
  int d = 4;
  int m_max = 10;
  std::vector<double> t_grid;
  double eps = 1e-12;
  int samples_per_cell = 100;
  std::uint64_t seed = 1;
  /// Dominance runs for m0 in [2, min(m_max, dominance_m0_max)]; 0 replicates skips them.
  long dominance_replicates = 10000;
  int dominance_m0_max = 8;
  int workers = 0;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<VerifyCell> cells;
  int matches = 0, ties = 0, violations = 0;
  int bellman_failures = 0;
  double max_abs_gap_optimal = 0.0;  // |gap| of the optimal schedule against itself
  std::vector<DominanceReport> dominance;
  int dominance_violations = 0;
  bool passed() const { return violations == 0 && bellman_failures == 0 && dominance_violations == 0; }
};

VerifyReport verify(const VerifyOptions& opt);

}  // namespace coadapt
