#pragma once

// Exact Laplace transforms of the optimal coupling's tail probabilities.
//
//   V(m)(alpha) = int_0^inf e^{-alpha t} P(tau > t | N_0 = m) dt
//   R(m) = V(m) - V(m-1)
//
// Built from the first-step recursion of the lumped death chain:
//   C2 level:  (m + alpha)(d-1) V(m) = (d-1) + m V(m-2) + m(d-2) V(m-1)
//   C3 level:  (md + alpha(d-1)) V(m) = (d-1) + md V(m-1)
// with V(0) = 0.

#include "coadapt/rational.hpp"
#include "coadapt/strategies.hpp"

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

namespace coadapt {

/// V(0..m_max) for integer d, regime chosen per level.
std::vector<QRational> laplace_V_table(int d, int m_max);
QRational laplace_V(int d, int m);
/// R(m) = V(m) - V(m-1), m >= 1.
QRational laplace_R(int d, int m);
/// R(0..m_max) with R(0) = 0.
std::vector<QRational> laplace_R_table(int d, int m_max);

/// Levels whose transforms vanish identically, so the matching time-domain
/// quantity is exactly zero for every t.
struct LaplaceZeros {
  std::vector<bool> r_zero;     // R(m) == 0, index m >= 1
  std::vector<bool> diff_zero;  // R(m-1) - R(m) == 0, index m >= 2
};
LaplaceZeros laplace_zero_pattern(int d, int m_max);

/// V(0..m_max) with d kept symbolic; the d >= 4 family (C3 only at m = 1).
std::vector<SymbolicRational> laplace_V_symbolic_table(int m_max);

/// C2 recursion at level m holds exactly for the given table.
bool c2_recursion_holds(std::span<const QRational> V, int d, int m);
bool c3_recursion_holds(std::span<const QRational> V, int d, int m);
/// (m+1+alpha)(d-1) R(m+1) = m R(m-1) + [m(d-2) - 1] R(m).
bool r_three_term_holds(std::span<const QRational> V, int d, int m);

bool c2_recursion_holds_symbolic(std::span<const SymbolicRational> V, int m);
bool r_three_term_holds_symbolic(std::span<const SymbolicRational> V, int m);

/// E[tau | N_0 = m] exactly (the alpha = 0 recursion).
mpq_class expected_tau(int d, int m);
std::vector<mpq_class> expected_tau_table(int d, int m_max);
/// Same recursion in double precision; used for very deep levels.
std::vector<double> expected_tau_table_real(int d, int m_max);

/// sum_{i=1}^{m} 1/(k i): mean absorption time of a process stepping by -k at
/// rate equal to its level, started from level k*m.
mpq_class mk_bound_mean(int k, int m);

struct TotalMonotoneReport {
  bool passed = true;
  int max_order = 0;
  /// First failing (order, alpha) when !passed.
  int failing_order = -1;
  mpq_class failing_alpha;
  /// (-1)^k f^(k)(alpha) for each grid point (rows) and order (columns).
  std::vector<std::vector<mpq_class>> signed_derivatives;
};

/// Necessary-condition check for total monotonicity on a finite grid:
/// (-1)^k f^(k)(alpha) >= 0 for k <= order. Throws on a pole in the grid.
TotalMonotoneReport check_total_monotone(const QRational& f, int order, std::span<const mpq_class> alpha_grid);

}  // namespace coadapt
