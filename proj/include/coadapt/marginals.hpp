#pragma once

// Statistical check that both coordinates of a coupling are unit-rate walks
// on G_d^n: per-coordinate change counts over [0, T] against Poisson(T), and
// change increments against the uniform law on {1, ..., d-1}.

#include "coadapt/state.hpp"
#include "coadapt/strategies.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace coadapt {

struct ChiSquareTest {
  std::string name;  // e.g. "X coord 2 counts"
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double p_adjusted = 1.0;  // Bonferroni
};

/// Pearson chi-square of observed counts against expected counts.
ChiSquareTest chi_square(std::string name, const std::vector<double>& observed, const std::vector<double>& expected);

/// Pearson test of samples against Poisson(mean); bins are merged so each
/// expected count is at least 5, tails pooled into the end bins.
ChiSquareTest poisson_chi_square(std::string name, const std::vector<long>& samples, double mean);

struct MarginalReport {
  StrategyId strategy = StrategyId::Optimal;
  WalkParams params;
  double horizon = 0.0;
  long replicates = 0;
  std::uint64_t seed = 0;
  double alpha = 1e-3;
  std::vector<ChiSquareTest> tests;
  /// Per-coordinate sample mean of change counts for X and Y.
  std::vector<double> mean_changes_x, mean_changes_y;
  /// Every event changed the same coordinates of X and Y.
  bool jump_times_identical = false;
  bool passed = false;
};

/// X_0 = 0 and Y_0 uniform (fresh per replicate); replicate r uses make_stream(seed, r).
MarginalReport validate_marginals(StrategyId id, WalkParams params, double horizon, long replicates,
                                  std::uint64_t seed, double alpha = 1e-3, int workers = 0);

}  // namespace coadapt
