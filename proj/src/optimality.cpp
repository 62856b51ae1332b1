#include "coadapt/optimality.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace coadapt {

namespace {

constexpr double kUnit = DBL_EPSILON / 2;

struct Candidate {
  Vertex vertex;
  RateSchedule lambda;
};

std::vector<Candidate> vertex_candidates(int d, int m) {
  std::vector<Candidate> c;
  c.push_back({Vertex::Origin, RateSchedule{}});
  if (m <= 0) return c;
  RateSchedule single;
  single(-1) = mpq_class(m * d, d - 1);
  single(-1).canonicalize();
  c.push_back({Vertex::AllSingle, single});
  if (m >= 2) {
    RateSchedule cap;
    cap(-1) = mpq_class(m * (d - 2), d - 1);
    cap(-2) = mpq_class(m, d - 1);
    for (auto& x : cap.lam) x.canonicalize();
    c.push_back({Vertex::Cap, cap});
    if (d > 2) {
      RateSchedule dbl;
      dbl(-2) = cap(-2);
      c.push_back({Vertex::DoubleOnly, dbl});
    }
  }
  return c;
}

int preference(Vertex v) {
  switch (v) {
    case Vertex::Cap: return 0;
    case Vertex::AllSingle: return 1;
    case Vertex::DoubleOnly: return 2;
    case Vertex::Origin: return 3;
  }
  return 4;
}

// v(m) - v(m+s) with its certified error, from whichever representation is tighter.
std::pair<double, double> drop(const TailTable& tab, int m, int s, std::size_t j) {
  const int k = m + s;
  const double via_v = tab.v(m, j) - tab.v(k, j);
  const double err_v = tab.err_v(m, j) + tab.err_v(k, j) + kUnit * std::abs(via_v);
  const double via_f = tab.F(k, j) - tab.F(m, j);
  const double err_f = tab.err_F(m, j) + tab.err_F(k, j) + kUnit * std::abs(via_f);
  return err_f < err_v ? std::pair{via_f, err_f} : std::pair{via_v, err_v};
}

std::pair<double, double> objective_with_error(const RealRateSchedule& lam, int m, const TailTable& tab,
                                               std::size_t j) {
  double obj = 0.0, err = 0.0;
  for (int s : {-2, -1, 1, 2}) {
    if (lam(s) == 0.0) continue;
    if (m + s < 0) throw UsageError("bellman: jump below level 0");
    if (m + s > tab.m_max) throw UsageError("bellman: tail table too shallow");
    const auto [diff, e] = drop(tab, m, s, j);
    obj += lam(s) * diff;
    err += lam(s) * e + 2.0 * kUnit * std::abs(lam(s) * diff);
  }
  return {obj, err};
}

}  // namespace

std::string_view vertex_name(Vertex v) {
  switch (v) {
    case Vertex::Origin: return "origin";
    case Vertex::AllSingle: return "all-single";
    case Vertex::Cap: return "cap";
    case Vertex::DoubleOnly: return "double-only";
  }
  return "?";
}

std::string_view status_name(CellStatus s) {
  switch (s) {
    case CellStatus::Match: return "match";
    case CellStatus::Tie: return "tie";
    case CellStatus::Violation: return "violation";
  }
  return "?";
}

FeasibleMax feasible_max(int d, int m, double r_m, double r_m_minus_1, double tie_tol) {
  if (d < 2) throw UsageError("feasible_max: d must be >= 2");
  if (m < 0) throw UsageError("feasible_max: m must be >= 0");
  if (!std::isfinite(r_m) || !std::isfinite(r_m_minus_1)) throw UsageError("feasible_max: r values must be finite");
  FeasibleMax out;
  out.negative_r = r_m < 0.0;
  const auto cands = vertex_candidates(d, m);
  std::vector<double> obj;
  double best = -INFINITY;
  for (const auto& c : cands) {
    const RealRateSchedule l = to_real(c.lambda);
    obj.push_back(l(-1) * r_m + l(-2) * (r_m + r_m_minus_1));
    best = std::max(best, obj.back());
  }
  std::size_t pick = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (obj[i] < best - tie_tol) continue;
    if (obj[pick] < best - tie_tol || preference(cands[i].vertex) < preference(cands[pick].vertex)) pick = i;
  }
  out.lambda = cands[pick].lambda;
  out.vertex = cands[pick].vertex;
  out.objective = obj[pick];
  if (m >= 2) {
    double cap = 0.0, single = 0.0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (cands[i].vertex == Vertex::Cap) cap = obj[i];
      if (cands[i].vertex == Vertex::AllSingle) single = obj[i];
    }
    out.tied = std::abs(cap - single) <= tie_tol;
  }
  return out;
}

double bellman_objective(const RealRateSchedule& lam, int m, const TailTable& tab, std::size_t j) {
  return objective_with_error(lam, m, tab, j).first;
}

void check_feasible(const RealRateSchedule& lam, int m, int d) {
  for (int s : {-2, -1, 1, 2}) {
    if (!(lam(s) >= 0.0) || !std::isfinite(lam(s))) throw UsageError("bellman: rates must be finite and >= 0");
    if (m + s < 0 && lam(s) != 0.0) throw UsageError("bellman: rate to a negative level");
  }
  RealRateSchedule down;
  down(-1) = lam(-1);
  down(-2) = lam(-2);
  if (!in_constraint_set(down, m, d)) throw UsageError("bellman: rates outside the constraint set");
}

BellmanGap bellman_gap(int m, const RealRateSchedule& lam, const TailTable& tab, std::size_t j) {
  check_feasible(lam, m, tab.d);
  const RealRateSchedule opt = to_real(optimal_rates(m, tab.d));
  if (lam == opt) return {};
  const auto [a, ea] = objective_with_error(lam, m, tab, j);
  const auto [b, eb] = objective_with_error(opt, m, tab, j);
  BellmanGap g;
  g.gap = a - b;
  g.slack = ea + eb + kUnit * (std::abs(a) + std::abs(b));
  return g;
}

BellmanGap bellman_gap(int d, int m, double t, const RealRateSchedule& lam, double eps) {
  const double grid[] = {t};
  const TailTable tab = survival_exact(d, m + 2, grid, eps);
  return bellman_gap(m, lam, tab, 0);
}

RealRateSchedule sample_feasible(int d, int m, Rng& rng) {
  RealRateSchedule lam;
  if (m <= 0) return lam;
  const double hi1 = static_cast<double>(m) * d / (d - 1);
  const double hi2 = m >= 2 ? static_cast<double>(m) / (d - 1) : 0.0;
  for (;;) {
    lam(-1) = uniform01(rng) * hi1;
    lam(-2) = uniform01(rng) * hi2;
    if (in_constraint_set(lam, m, d, 0.0)) return lam;
  }
}

std::vector<RealRateSchedule> feasible_vertices(int d, int m) {
  std::vector<RealRateSchedule> out;
  for (const auto& c : vertex_candidates(d, m)) out.push_back(to_real(c.lambda));
  return out;
}

DominanceReport dominance_test(int d, int m0, StrategyId competitor, std::span<const double> t_grid, long replicates,
                               std::uint64_t seed, double eps, int workers) {
  if (competitor == StrategyId::Optimal) throw UsageError("dominance_test: competitor must differ from optimal");
  const TailTable tab = survival_exact(d, m0, t_grid, eps);
  const SurvivalCurve emp = estimate_survival(competitor, d, m0, t_grid, replicates, seed, workers);
  DominanceReport rep;
  rep.d = d;
  rep.m0 = m0;
  rep.competitor = competitor;
  rep.replicates = replicates;
  rep.seed = seed;
  rep.eps = eps;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    DominanceCell c;
    c.t = t_grid[j];
    c.empirical = emp.value[j];
    c.half_width_3sigma = emp.half_width_3sigma[j];
    c.exact = tab.v(m0, j);
    c.margin = kZ3 * std::sqrt(c.exact * (1.0 - c.exact) / static_cast<double>(replicates));
    c.violation = c.empirical + c.margin < c.exact - eps;
    rep.violations += c.violation;
    rep.cells.push_back(c);
  }
  return rep;
}

VerifyReport verify(const VerifyOptions& opt) {
  if (opt.d < 2) throw UsageError("verify: d must be >= 2");
  if (opt.m_max < 1) throw UsageError("verify: m_max must be >= 1");
  if (opt.t_grid.empty()) throw UsageError("verify: empty time grid");
  VerifyReport rep;
  rep.options = opt;
  const int d = opt.d;
  const TailTable tab = survival_exact(d, opt.m_max + 2, opt.t_grid, opt.eps);
  const RDiffTable rd = r_diff_table(tab);

  std::uint64_t cell_index = 0;
  for (int m = 1; m <= opt.m_max; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    const RateSchedule target = optimal_rates(m, d);
    for (std::size_t j = 0; j < opt.t_grid.size(); ++j, ++cell_index) {
      VerifyCell cell;
      cell.m = m;
      cell.t = opt.t_grid[j];
      cell.r_m = rd.r[mi][j].value;
      double tie_tol = 0.0;
      if (m >= 2) {
        cell.r_m_minus_1 = rd.r[mi - 1][j].value;
        cell.diff_sign = rd.diff[mi][j].sign;
        tie_tol = 2.0 * m / (d - 1.0) * rd.diff[mi][j].error;
      }
      const FeasibleMax fm = feasible_max(d, m, cell.r_m, cell.r_m_minus_1, tie_tol);
      cell.vertex = fm.vertex;
      cell.objective = fm.objective;
      cell.tied = fm.tied;
      if (fm.lambda == target) {
        cell.status = CellStatus::Match;
        ++rep.matches;
      } else if (fm.tied) {
        cell.status = CellStatus::Tie;
        ++rep.ties;
      } else {
        cell.status = CellStatus::Violation;
        ++rep.violations;
      }

      rep.max_abs_gap_optimal =
          std::max(rep.max_abs_gap_optimal, std::abs(bellman_gap(m, to_real(target), tab, j).gap));
      Rng rng = make_stream(opt.seed, cell_index);
      std::vector<RealRateSchedule> trial = feasible_vertices(d, m);
      for (int s = 0; s < opt.samples_per_cell; ++s) {
        RealRateSchedule lam = sample_feasible(d, m, rng);
        if (s % 2 == 1) lam(1) = uniform01(rng) * m;
        trial.push_back(lam);
      }
      cell.max_gap = -INFINITY;
      for (const auto& lam : trial) {
        const BellmanGap g = bellman_gap(m, lam, tab, j);
        if (g.gap > cell.max_gap) {
          cell.max_gap = g.gap;
          cell.gap_slack = g.slack;
        }
        if (g.gap > g.slack) ++rep.bellman_failures;
      }
      rep.cells.push_back(cell);
    }
  }

  if (opt.dominance_replicates > 0) {
    for (int m0 = 2; m0 <= std::min(opt.m_max, opt.dominance_m0_max); ++m0) {
      for (StrategyId c : {StrategyId::Independent, StrategyId::Synchronous, StrategyId::PairwiseClassic}) {
        const std::uint64_t seed = splitmix64(opt.seed ^ (static_cast<std::uint64_t>(m0) << 8 | static_cast<unsigned>(c)));
        DominanceReport dr = dominance_test(d, m0, c, opt.t_grid, opt.dominance_replicates, seed, opt.eps, opt.workers);
        rep.dominance_violations += dr.violations;
        rep.dominance.push_back(std::move(dr));
      }
    }
  }
  return rep;
}

}  // namespace coadapt
