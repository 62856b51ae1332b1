#include "coadapt/tail_engine.hpp"

#include "coadapt/laplace.hpp"
#include "coadapt/simd.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace coadapt {

namespace {

constexpr double kUnit = DBL_EPSILON / 2;
// Poisson weights below this fraction of the modal weight are dropped.
constexpr double kTiny = 1e-300;

struct PoissonWindow {
  int k_lo = 0;
  std::vector<double> w;  // normalized weights for k_lo, k_lo+1, ...
  double trunc = 0.0;     // bound on the dropped mass
  int k_hi() const { return k_lo + static_cast<int>(w.size()) - 1; }
};

PoissonWindow poisson_window(double mu) {
  PoissonWindow pw;
  if (mu == 0.0) {
    pw.w = {1.0};
    return pw;
  }
  const int mode = static_cast<int>(std::floor(mu));
  std::vector<double> up{1.0};
  double w = 1.0;
  int k = mode;
  double up_tail = 0.0;
  for (;;) {
    const double ratio = mu / (k + 1);
    w *= ratio;
    ++k;
    if (w < kTiny) {
      up_tail = w / (1.0 - mu / (k + 1));
      break;
    }
    up.push_back(w);
  }
  std::vector<double> down;
  w = 1.0;
  k = mode;
  double down_tail = 0.0;
  while (k > 0) {
    w *= k / mu;
    --k;
    if (w < kTiny) {
      down_tail = w / (1.0 - k / mu);
      break;
    }
    down.push_back(w);
  }
  pw.k_lo = mode - static_cast<int>(down.size());
  pw.w.assign(down.rbegin(), down.rend());
  pw.w.insert(pw.w.end(), up.begin(), up.end());
  double sum = 0.0;
  for (double x : pw.w) sum += x;
  for (double& x : pw.w) x /= sum;
  pw.trunc = (up_tail + down_tail) / sum;
  return pw;
}

}  // namespace

LumpedGenerator make_generator(int d, int m_max, StrategyId id) {
  if (d < 2) throw UsageError("make_generator: d must be >= 2");
  if (m_max < 0) throw UsageError("make_generator: m_max must be >= 0");
  LumpedGenerator g;
  g.d = d;
  g.m_max = m_max;
  g.strategy = id;
  g.uniform_rate = 0;
  for (int m = 0; m <= m_max; ++m) {
    RateSchedule r = strategy_rates(id, m, d);
    if (r(1) != 0 || r(2) != 0) throw UsageError("make_generator: strategy has upward jumps");
    if (r.total_exit() > g.uniform_rate) g.uniform_rate = r.total_exit();
    g.rates.push_back(r);
  }
  if (g.uniform_rate == 0) g.uniform_rate = 1;
  for (const auto& r : g.rates) {
    mpq_class stay = (g.uniform_rate - r.total_exit()) / g.uniform_rate;
    mpq_class p1 = r(-1) / g.uniform_rate;
    mpq_class p2 = r(-2) / g.uniform_rate;
    g.p_stay.push_back(stay.get_d());
    g.p_down1.push_back(p1.get_d());
    g.p_down2.push_back(p2.get_d());
  }
  return g;
}

double TailTable::max_error() const {
  double e = 0.0;
  for (int m = 0; m <= m_max; ++m)
    for (std::size_t j = 0; j < t_grid.size(); ++j) e = std::max(e, error(m, j));
  return e;
}

TailTable survival_exact(int d, int m_max, std::span<const double> t_grid, double eps, StrategyId id) {
  if (!(eps > 0.0)) throw UsageError("survival_exact: eps must be > 0");
  for (double t : t_grid)
    if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("survival_exact: times must be finite and >= 0");
  const LumpedGenerator g = make_generator(d, m_max, id);
  const double lambda = g.uniform_rate.get_d();

  TailTable tab;
  tab.d = d;
  tab.m_max = m_max;
  tab.strategy = id;
  tab.t_grid.assign(t_grid.begin(), t_grid.end());
  tab.eps = eps;

  const std::size_t nt = t_grid.size();
  const auto levels = static_cast<std::size_t>(m_max) + 1;
  std::vector<PoissonWindow> win(nt);
  int k_max = 0;
  for (std::size_t j = 0; j < nt; ++j) {
    win[j] = poisson_window(lambda * t_grid[j]);
    k_max = std::max(k_max, win[j].k_hi());
  }

  // acc_v[j][m], acc_f[j][m]; transposed into the table at the end.
  std::vector<std::vector<double>> acc_v(nt, std::vector<double>(levels, 0.0));
  std::vector<std::vector<double>> acc_f(nt, std::vector<double>(levels, 0.0));
  std::vector<double> s(levels, 1.0), a(levels, 0.0);
  s[0] = 0.0;
  a[0] = 1.0;
  auto step = [&](std::vector<double>& x) {
    for (std::size_t m = levels; m-- > 1;) {
      double next = g.p_stay[m] * x[m] + g.p_down1[m] * x[m - 1];
      if (m >= 2) next += g.p_down2[m] * x[m - 2];
      x[m] = next;
    }
  };
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      step(s);
      step(a);
    }
    for (std::size_t j = 0; j < nt; ++j) {
      const auto& pw = win[j];
      if (k < pw.k_lo || k > pw.k_hi()) continue;
      const double w = pw.w[static_cast<std::size_t>(k - pw.k_lo)];
      simd::axpy(w, s, acc_v[j]);
      simd::axpy(w, a, acc_f[j]);
    }
  }

  tab.value.assign(levels, std::vector<double>(nt));
  tab.absorbed.assign(levels, std::vector<double>(nt));
  for (std::size_t j = 0; j < nt; ++j) {
    const int kh = win[j].k_hi();
    const int width = static_cast<int>(win[j].w.size());
    tab.k_hi.push_back(kh);
    tab.rel_err.push_back((4.0 * kh + 5.0 * width + 8.0) * kUnit * (1.0 + 1e-3));
    tab.trunc.push_back(win[j].trunc);
    for (std::size_t m = 0; m < levels; ++m) {
      tab.value[m][j] = std::min(1.0, acc_v[j][m]);
      tab.absorbed[m][j] = std::min(1.0, acc_f[j][m]);
    }
  }
  if (tab.max_error() > eps) throw std::runtime_error("survival_exact: cannot certify the requested eps");
  return tab;
}

double survival_exact(int d, int m, double t, double eps) {
  const double grid[] = {t};
  return survival_exact(d, m, grid, eps).v(m, 0);
}

std::string_view sign_name(Sign s) {
  switch (s) {
    case Sign::Positive: return "positive";
    case Sign::Negative: return "negative";
    case Sign::Zero: return "zero";
    case Sign::Undetermined: return "undetermined";
  }
  return "undetermined";
}

Sign certify(double value, double error, bool exact_zero) {
  if (exact_zero) return Sign::Zero;
  if (value > 2.0 * error) return Sign::Positive;
  if (value < -2.0 * error) return Sign::Negative;
  return Sign::Undetermined;
}

int RDiffTable::count(bool of_diff, Sign s, int m_lo) const {
  const auto& rows = of_diff ? diff : r;
  const int first = std::max(m_lo, of_diff ? 2 : 1);
  int c = 0;
  for (int m = first; m <= m_max; ++m)
    for (const auto& cell : rows[static_cast<std::size_t>(m)]) c += cell.sign == s;
  return c;
}

RDiffTable r_diff_table(const TailTable& tab) {
  if (tab.strategy != StrategyId::Optimal) throw UsageError("r_diff_table: needs the optimal coupling's table");
  const LaplaceZeros zeros = laplace_zero_pattern(tab.d, tab.m_max);
  RDiffTable out;
  out.d = tab.d;
  out.m_max = tab.m_max;
  out.t_grid = tab.t_grid;
  const std::size_t nt = tab.t_grid.size();
  const auto levels = static_cast<std::size_t>(tab.m_max) + 1;
  out.r.assign(levels, std::vector<CertifiedValue>(nt));
  out.diff.assign(levels, std::vector<CertifiedValue>(nt));

  // Evaluate a signed combination of levels from both representations and
  // keep the one with the smaller certified error.
  auto combine = [&](std::initializer_list<std::pair<int, double>> terms, std::size_t j, bool exact_zero) {
    double val_v = 0.0, err_v = 0.0, mag_v = 0.0;
    double val_f = 0.0, err_f = 0.0, mag_f = 0.0;
    for (auto [m, c] : terms) {
      val_v += c * tab.v(m, j);
      mag_v += std::abs(c) * tab.v(m, j);
      err_v += std::abs(c) * tab.err_v(m, j);
      val_f -= c * tab.F(m, j);
      mag_f += std::abs(c) * tab.F(m, j);
      err_f += std::abs(c) * tab.err_F(m, j);
    }
    const double n = static_cast<double>(terms.size());
    err_v += n * kUnit * mag_v;
    err_f += n * kUnit * mag_f;
    CertifiedValue cv;
    if (err_f < err_v) {
      cv.value = val_f;
      cv.error = err_f;
    } else {
      cv.value = val_v;
      cv.error = err_v;
    }
    cv.sign = certify(cv.value, cv.error, exact_zero);
    return cv;
  };

  for (int m = 1; m <= tab.m_max; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    for (std::size_t j = 0; j < nt; ++j) {
      out.r[mi][j] = combine({{m, 1.0}, {m - 1, -1.0}}, j, zeros.r_zero[mi]);
      if (m >= 2) out.diff[mi][j] = combine({{m - 1, 2.0}, {m - 2, -1.0}, {m, -1.0}}, j, zeros.diff_zero[mi]);
    }
  }
  return out;
}

RDiffTable r_diff_table(int d, int m_max, std::span<const double> t_grid, double eps) {
  return r_diff_table(survival_exact(d, m_max, t_grid, eps));
}

}  // namespace coadapt
