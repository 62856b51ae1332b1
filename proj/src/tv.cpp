#include "coadapt/tv.hpp"

#include "coadapt/laplace.hpp"
#include "coadapt/simd.hpp"
#include "coadapt/state.hpp"
#include "coadapt/tail_engine.hpp"

#include <algorithm>
#include <cfloat>
#include <climits>
#include <cmath>
#include <limits>

namespace coadapt {

namespace {

double log_choose(long n, long k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

// k * log(x), with 0 * log(0) read as 0.
double xlogy(double k, double x) { return k == 0.0 ? 0.0 : k * std::log(x); }

// Neumaier-compensated sum.
struct Compensated {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

// log Binomial(n, 1 - 1/d)(m), m = 0..n.
std::vector<double> log_start_weights(int d, long n) {
  std::vector<double> lw(static_cast<std::size_t>(n) + 1);
  const double lp = std::log1p(-1.0 / d), lq = -std::log(static_cast<double>(d));
  for (long m = 0; m <= n; ++m)
    lw[static_cast<std::size_t>(m)] = log_choose(n, m) + m * lp + static_cast<double>(n - m) * lq;
  return lw;
}

}  // namespace

CoordinateLaw coordinate_law(int d, double t) {
  if (d < 2) throw UsageError("coordinate_law: d must be >= 2");
  if (!(t >= 0.0)) throw UsageError("coordinate_law: t must be >= 0");
  CoordinateLaw law;
  law.d = d;
  law.t = t;
  const double x = -d * t / (d - 1.0);
  law.a = 1.0 / d + (1.0 - 1.0 / d) * std::exp(x);
  law.b = -std::expm1(x) / d;
  return law;
}

double tv_exact(int d, long n, double t) {
  if (n < 1) throw UsageError("tv_exact: n must be >= 1");
  const CoordinateLaw law = coordinate_law(d, t);
  // k = number of coordinates still at their start value.
  const auto len = static_cast<std::size_t>(n) + 1;
  std::vector<double> lp(len), lq(len);
  const double ld1 = std::log(d - 1.0), lnd = std::log(static_cast<double>(d));
  for (long k = 0; k <= n; ++k) {
    const double rest = static_cast<double>(n - k);
    const double base = log_choose(n, k) + rest * ld1;
    lp[static_cast<std::size_t>(k)] = base + xlogy(static_cast<double>(k), law.a) + xlogy(rest, law.b);
    lq[static_cast<std::size_t>(k)] = base - static_cast<double>(n) * lnd;
  }
  return std::clamp(simd::positive_exp_diff_sum(lp, lq), 0.0, 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double cutoff_time(int d, long n) {
  if (n < 1) throw UsageError("cutoff_time: n must be >= 1");
  return 0.5 * ((d - 1.0) / d) * std::log(static_cast<double>(n));
}

double cutoff_asymptotic(int d, double theta) {
  return 2.0 * normal_cdf(std::sqrt(d - 1.0) / 2.0 * std::exp(-d * theta / (d - 1.0))) - 1.0;
}

std::vector<CutoffPoint> cutoff_profile(int d, long n, std::span<const double> thetas) {
  if (d < 2) throw UsageError("cutoff_profile: d must be >= 2");
  if (n < 2) throw UsageError("cutoff_profile: n must be >= 2");
  std::vector<CutoffPoint> out;
  for (double th : thetas) {
    CutoffPoint p;
    p.d = d;
    p.n = n;
    p.theta = th;
    p.T_d = cutoff_time(d, n);
    p.t = p.T_d + th;
    if (p.t < 0.0) {
      p.t = 0.0;
      p.clamped = true;
    }
    p.tv_exact = tv_exact(d, n, p.t);
    p.tv_asymptotic = cutoff_asymptotic(d, th);
    out.push_back(p);
  }
  return out;
}

SurvivalCurve survival_from_stationary(int d, long n, std::span<const double> t_grid, double eps) {
  if (n < 1) throw UsageError("survival_from_stationary: n must be >= 1");
  if (n > INT_MAX) throw UsageError("survival_from_stationary: n too large");
  const TailTable tab = survival_exact(d, static_cast<int>(n), t_grid, eps);
  const std::vector<double> lw = log_start_weights(d, n);
  std::vector<double> w(lw.size());
  for (std::size_t m = 0; m < lw.size(); ++m) w[m] = std::exp(lw[m]);

  SurvivalCurve c;
  c.kind = CurveKind::Exact;
  c.t_grid.assign(t_grid.begin(), t_grid.end());
  c.half_width_95.assign(t_grid.size(), 0.0);
  c.half_width_3sigma.assign(t_grid.size(), 0.0);
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    Compensated acc;
    double err = 0.0;
    for (std::size_t m = 1; m < w.size(); ++m) {
      acc.add(w[m] * tab.v(static_cast<int>(m), j));
      err += w[m] * tab.error(static_cast<int>(m), j);
    }
    const double v = acc.value();
    c.value.push_back(std::clamp(v, 0.0, 1.0));
    c.error = std::max(c.error, err + 64.0 * static_cast<double>(n) * DBL_EPSILON * v);
  }
  return c;
}

double limit_tail(long n, double t) {
  if (n < 1) throw UsageError("limit_tail: n must be >= 1");
  if (!(t >= 0.0)) throw UsageError("limit_tail: t must be >= 0");
  return -std::expm1(static_cast<double>(n) * std::log1p(-std::exp(-t)));
}

std::vector<DinftyRow> dinfty_convergence(long n, std::span<const int> d_list, std::span<const double> t_grid,
                                          double eps) {
  for (std::size_t i = 1; i < d_list.size(); ++i)
    if (d_list[i] <= d_list[i - 1]) throw UsageError("dinfty_convergence: d_list must be increasing");
  std::vector<DinftyRow> out;
  for (int d : d_list) {
    const SurvivalCurve c = survival_from_stationary(d, n, t_grid, eps);
    DinftyRow row;
    row.d = d;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
      const double g = std::abs(c.value[j] - limit_tail(n, t_grid[j]));
      row.gap.push_back(g);
      if (g > row.sup_gap || j == 0) {
        row.sup_gap = g;
        row.t_at_sup = t_grid[j];
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

MeanTau mean_tau_stationary(int d, long n) {
  if (d < 2) throw UsageError("mean_tau_stationary: d must be >= 2");
  if (n < 1) throw UsageError("mean_tau_stationary: n must be >= 1");
  if (n > INT_MAX) throw UsageError("mean_tau_stationary: n too large");
  MeanTau r;
  r.d = d;
  r.n = n;
  if (n <= kMeanTauExactLimit) {
    const auto E = expected_tau_table(d, static_cast<int>(n));
    // sum_m C(n,m) (d-1)^m E(m) / d^n
    mpz_class binom = 1, pw = 1, dn;
    mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(n));
    mpq_class acc = 0;
    for (long m = 0; m <= n; ++m) {
      if (m > 0) {
        binom = binom * (n - m + 1) / m;
        pw *= d - 1;
      }
      acc += mpq_class(binom * pw) * E[static_cast<std::size_t>(m)];
    }
    acc /= mpq_class(dn);
    acc.canonicalize();
    r.value = acc.get_d();
    r.exact = acc;
  } else {
    const auto E = expected_tau_table_real(d, static_cast<int>(n));
    const auto lw = log_start_weights(d, n);
    r.value = simd::weighted_exp_sum(lw, E);
  }
  r.ratio_to_log_n = n > 1 ? r.value / std::log(static_cast<double>(n)) : std::numeric_limits<double>::quiet_NaN();
  r.within_bounds = n > 1 && r.ratio_to_log_n >= 0.5 && r.ratio_to_log_n <= 1.0;
  return r;
}

}  // namespace coadapt
