#pragma once

// Tail probabilities v(m, t) = P(tau > t | N_0 = m) of the optimal coupling,
// computed by uniformization of the lumped pure-death chain.
//
// Both v and its complement F = 1 - v are accumulated as sums of nonnegative
// terms, so each carries a small relative error bound. A cell's certified
// error is the smaller of the two absolute bounds.

#include "coadapt/strategies.hpp"

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

namespace coadapt {

/// Death chain of N under a strategy with no upward jumps, levels 0..m_max.
struct LumpedGenerator {
  int d = 2;
  int m_max = 0;
  StrategyId strategy = StrategyId::Optimal;
  std::vector<RateSchedule> rates;  // index m
  mpq_class uniform_rate;           // max total exit over levels
  /// Uniformized one-step probabilities (stay, down 1, down 2), exact then rounded.
  std::vector<double> p_stay, p_down1, p_down2;

  mpq_class exit_rate(int m) const { return rates[static_cast<std::size_t>(m)].total_exit(); }
};

LumpedGenerator make_generator(int d, int m_max, StrategyId id = StrategyId::Optimal);

struct TailTable {
  int d = 2;
  int m_max = 0;
  StrategyId strategy = StrategyId::Optimal;
  std::vector<double> t_grid;
  double eps = 0.0;  // requested bound
  /// value[m][j] = v(m, t_j); absorbed[m][j] = 1 - v(m, t_j).
  std::vector<std::vector<double>> value;
  std::vector<std::vector<double>> absorbed;
  /// Relative error bound and absolute truncation mass, per grid point.
  std::vector<double> rel_err;
  std::vector<double> trunc;
  /// Poisson truncation window used at each grid point.
  std::vector<int> k_hi;

  double v(int m, std::size_t j) const { return value[static_cast<std::size_t>(m)][j]; }
  double F(int m, std::size_t j) const { return absorbed[static_cast<std::size_t>(m)][j]; }
  double err_v(int m, std::size_t j) const { return rel_err[j] * v(m, j) + trunc[j]; }
  double err_F(int m, std::size_t j) const { return rel_err[j] * F(m, j) + trunc[j]; }
  /// Certified absolute error of v(m, t_j).
  double error(int m, std::size_t j) const { return err_v(m, j); }
  /// Largest certified error over the table.
  double max_error() const;
};

/// v(m, t) for m = 0..m_max on the grid. Throws std::runtime_error if the
/// certified bound exceeds eps anywhere.
TailTable survival_exact(int d, int m_max, std::span<const double> t_grid, double eps = 1e-12,
                         StrategyId id = StrategyId::Optimal);
double survival_exact(int d, int m, double t, double eps = 1e-12);

enum class Sign { Positive, Negative, Zero, Undetermined };
std::string_view sign_name(Sign s);

struct CertifiedValue {
  double value = 0.0;
  double error = 0.0;
  Sign sign = Sign::Undetermined;
};

/// Sign under the 2-error rule; exact_zero comes from the rational engine.
Sign certify(double value, double error, bool exact_zero);

struct RDiffTable {
  int d = 2;
  int m_max = 0;
  std::vector<double> t_grid;
  /// r[m][j] = v(m, t_j) - v(m-1, t_j), m >= 1 (row 0 unused).
  std::vector<std::vector<CertifiedValue>> r;
  /// diff[m][j] = r(m-1, t_j) - r(m, t_j), m >= 2 (rows 0 and 1 unused).
  std::vector<std::vector<CertifiedValue>> diff;

  int count(bool of_diff, Sign s, int m_lo = 0) const;
};

/// Increments r and their differences, certified for the optimal coupling.
RDiffTable r_diff_table(int d, int m_max, std::span<const double> t_grid, double eps = 1e-12);
RDiffTable r_diff_table(const TailTable& tab);

}  // namespace coadapt
