#pragma once

// Distance to stationarity of the product walk started from 0, the cutoff
// asymptotics, and the large-d limit of the optimal coupling.

#include "coadapt/survival_curve.hpp"

#include <gmpxx.h>

#include <optional>
#include <span>
#include <vector>

namespace coadapt {

/// Law of one coordinate at time t: P(start value) = a, P(each other value) = b.
struct CoordinateLaw {
  int d = 2;
  double t = 0.0;
  double a = 1.0;
  double b = 0.0;
};

CoordinateLaw coordinate_law(int d, double t);

/// Exact TV distance between L(X_t), X_0 = 0, and the uniform law on G_d^n.
double tv_exact(int d, long n, double t);

/// Standard normal distribution function.
double normal_cdf(double x);

/// T_d = ((d-1)/d) log(n) / 2.
double cutoff_time(int d, long n);
/// 2 Phi(sqrt(d-1)/2 exp(-d theta/(d-1))) - 1.
double cutoff_asymptotic(int d, double theta);

struct CutoffPoint {
  int d = 2;
  long n = 1;
  double theta = 0.0;
  double T_d = 0.0;
  double t = 0.0;  // T_d + theta, clamped at 0
  double tv_exact = 0.0;
  double tv_asymptotic = 0.0;
  bool clamped = false;
};

std::vector<CutoffPoint> cutoff_profile(int d, long n, std::span<const double> thetas);

/// P(tau > t) for the optimal coupling with X_0 = 0 and Y_0 uniform.
SurvivalCurve survival_from_stationary(int d, long n, std::span<const double> t_grid, double eps = 1e-12);

/// 1 - (1 - e^{-t})^n.
double limit_tail(long n, double t);

struct DinftyRow {
  int d = 2;
  double sup_gap = 0.0;
  double t_at_sup = 0.0;
  /// Pointwise |survival_from_stationary - limit_tail| on the grid.
  std::vector<double> gap;
};

std::vector<DinftyRow> dinfty_convergence(long n, std::span<const int> d_list, std::span<const double> t_grid,
                                          double eps = 1e-12);

struct MeanTau {
  int d = 2;
  long n = 1;
  double value = 0.0;
  /// Present when the mixture was summed in exact arithmetic.
  std::optional<mpq_class> exact;
  double ratio_to_log_n = 0.0;  // NaN for n = 1
  bool within_bounds = false;   // ratio in [1/2, 1]
};

/// Largest n for which mean_tau_stationary sums exactly.
inline constexpr long kMeanTauExactLimit = 4096;

/// E[tau] with X_0 = 0, Y_0 uniform: sum over m of Binomial(n, 1-1/d)(m) E[tau | m].
MeanTau mean_tau_stationary(int d, long n);

}  // namespace coadapt
