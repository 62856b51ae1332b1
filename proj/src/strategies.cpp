#include "coadapt/strategies.hpp"

#include <algorithm>
#include <cmath>

namespace coadapt {

StrategyId parse_strategy(std::string_view name) {
  if (name == "optimal") return StrategyId::Optimal;
  if (name == "independent") return StrategyId::Independent;
  if (name == "synchronous") return StrategyId::Synchronous;
  if (name == "pairwise-classic") return StrategyId::PairwiseClassic;
  throw UsageError("unknown strategy '" + std::string(name) +
                   "' (expected optimal | independent | synchronous | pairwise-classic)");
}

std::string_view strategy_name(StrategyId id) {
  switch (id) {
    case StrategyId::Optimal: return "optimal";
    case StrategyId::Independent: return "independent";
    case StrategyId::Synchronous: return "synchronous";
    case StrategyId::PairwiseClassic: return "pairwise-classic";
  }
  throw UsageError("unknown strategy id");
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Absorbed: return "absorbed";
    case Regime::C2: return "C2";
    case Regime::C3: return "C3";
  }
  return "?";
}

Regime regime(int m, int d) {
  if (d < 2) throw UsageError("regime: d must be >= 2");
  if (m < 0) throw UsageError("regime: m must be >= 0");
  if (m == 0) return Regime::Absorbed;
  // m < 2(d-1)/(d-2)  <=>  m(d-2) < 2(d-1); for d = 2 the bound is infinite.
  const bool small = d == 2 || static_cast<long long>(m) * (d - 2) < 2LL * (d - 1);
  return (m % 2 == 1 && small) ? Regime::C3 : Regime::C2;
}

RealRateSchedule to_real(const RateSchedule& r) {
  RealRateSchedule out;
  for (std::size_t i = 0; i < 5; ++i) out.lam[i] = r.lam[i].get_d();
  return out;
}

bool in_constraint_set(const RateSchedule& r, int m, int d) {
  for (const auto& x : r.lam)
    if (x < 0) return false;
  const mpq_class budget = mpq_class(d - 1) * r(-1) + mpq_class(2 * (d - 1)) * r(-2);
  return budget <= mpq_class(m) * d && mpq_class(d - 1) * r(-2) <= m;
}

bool in_constraint_set(const RealRateSchedule& r, int m, int d, double tol) {
  for (double x : r.lam)
    if (x < -tol) return false;
  const double scale = std::max(1.0, static_cast<double>(m) * d);
  return (d - 1) * r(-1) + 2.0 * (d - 1) * r(-2) <= m * static_cast<double>(d) + tol * scale &&
         (d - 1) * r(-2) <= m + tol * scale;
}

RateSchedule optimal_rates(int m, int d) {
  RateSchedule r;
  switch (regime(m, d)) {
    case Regime::Absorbed: break;
    case Regime::C2:
      r(-2) = mpq_class(m, d - 1);
      r(-1) = mpq_class(m * (d - 2), d - 1);
      break;
    case Regime::C3: r(-1) = mpq_class(m * d, d - 1); break;
  }
  for (auto& x : r.lam) x.canonicalize();
  return r;
}

RateSchedule competitor_rates(StrategyId id, int m, int d) {
  if (m < 0 || d < 2) throw UsageError("competitor_rates: need m >= 0 and d >= 2");
  RateSchedule r;
  switch (id) {
    case StrategyId::Optimal: throw UsageError("competitor_rates: Optimal is not a competitor");
    case StrategyId::Synchronous: break;
    case StrategyId::Independent: r(-1) = mpq_class(2 * m, d - 1); break;
    case StrategyId::PairwiseClassic:
      if (m % 2 == 0) {
        r(-2) = mpq_class(m, d - 1);
        r(-1) = mpq_class(m * (d - 2), d - 1);
      } else {
        r(-1) = mpq_class(2 * m, d - 1);
      }
      break;
  }
  for (auto& x : r.lam) x.canonicalize();
  return r;
}

RateSchedule strategy_rates(StrategyId id, int m, int d) {
  return id == StrategyId::Optimal ? optimal_rates(m, d) : competitor_rates(id, m, d);
}

QMatrix QMatrix::identity(WalkParams p) {
  QMatrix q(p);
  for (int r = 0; r < q.dim(); ++r) q(r, r) = 1.0;
  return q;
}

double QMatrix::stochasticity_defect() const {
  double worst = 0.0;
  const int n = dim();
  for (int r = 0; r < n; ++r) {
    double row = 0.0, col = 0.0;
    for (int c = 0; c < n; ++c) {
      row += (*this)(r, c);
      col += (*this)(c, r);
    }
    worst = std::max({worst, std::abs(row - 1.0), std::abs(col - 1.0)});
  }
  return worst;
}

bool QMatrix::doubly_stochastic(double tol) const {
  for (int r = 0; r < dim(); ++r)
    for (int c = 0; c < dim(); ++c)
      if ((*this)(r, c) < 0.0) return false;
  return stochasticity_defect() <= tol;
}

namespace {

void fill_matched_identity(QMatrix& q, const PairConfig& cfg) {
  const int d = cfg.params().d;
  for (int i : cfg.matched)
    for (int k = 0; k < d; ++k) q.at(i, k, i, k) = 1.0;
}

/// Clause C2 plus the no-op completion q((i,X(i)),(j,Y(j))) = 1/(N-1).
void fill_c2(QMatrix& q, const PairConfig& cfg) {
  const int m = cfg.m();
  const int d = cfg.params().d;
  if (m < 2) throw UsageError("C2 pairing needs at least two unmatched coordinates");
  const double w = 1.0 / (m - 1);
  for (int i : cfg.unmatched) {
    for (int j : cfg.unmatched) {
      if (j == i) continue;
      q.at(i, cfg.y[i], j, cfg.x[j]) = w;
      q.at(i, cfg.x[i], j, cfg.y[j]) = w;
    }
    for (int k = 0; k < d; ++k)
      if (k != cfg.x[i] && k != cfg.y[i]) q.at(i, k, i, k) = 1.0;
  }
}

void fill_c3(QMatrix& q, const PairConfig& cfg) {
  const int d = cfg.params().d;
  for (int i : cfg.unmatched)
    for (int k = 0; k < d; ++k) q.at(i, k, i, k) = 1.0;
}

// X and Y each hit the other's value with probability 1/(d-1) per jump and
// never otherwise create a match. The spare values of the unmatched
// coordinates are cycled across coordinates so no spare-to-spare move matches.
void fill_independent(QMatrix& q, const PairConfig& cfg) {
  const int d = cfg.params().d;
  struct Slot {
    int i, k;
  };
  std::vector<Slot> spare;
  for (int i : cfg.unmatched) {
    q.at(i, cfg.x[i], i, cfg.x[i]) = 1.0;
    q.at(i, cfg.y[i], i, cfg.y[i]) = 1.0;
    for (int k = 0; k < d; ++k)
      if (k != cfg.x[i] && k != cfg.y[i]) spare.push_back({i, k});
  }
  if (spare.empty()) return;
  const int m = cfg.m();
  const auto s = static_cast<int>(spare.size());
  if (m >= 2) {
    for (int p = 0; p < s; ++p) {
      const Slot& a = spare[static_cast<std::size_t>(p)];
      const Slot& b = spare[static_cast<std::size_t>((p + (d - 2)) % s)];
      q.at(a.i, a.k, b.i, b.k) = 1.0;
    }
  } else if (s >= 2) {
    for (int p = 0; p < s; ++p) {
      const Slot& a = spare[static_cast<std::size_t>(p)];
      const Slot& b = spare[static_cast<std::size_t>((p + 1) % s)];
      q.at(a.i, a.k, b.i, b.k) = 1.0;
    }
  } else if (!cfg.matched.empty()) {
    // d = 3, m = 1: swap the spare slot with a matched coordinate's no-op pair.
    const Slot& a = spare.front();
    const int j = cfg.matched.front();
    const int v = cfg.x[j];
    q.at(j, v, j, v) = 0.0;
    q.at(a.i, a.k, j, v) = 1.0;
    q.at(j, v, a.i, a.k) = 1.0;
  } else {
    // d = 3, n = 1: no independent realisation exists; the spare move matches.
    q.at(spare.front().i, spare.front().k, spare.front().i, spare.front().k) = 1.0;
  }
}

}  // namespace

QMatrix build_optimal_q(const PairConfig& cfg, Regime clause) {
  QMatrix q(cfg.params());
  fill_matched_identity(q, cfg);
  switch (clause) {
    case Regime::Absorbed:
      if (cfg.m() != 0) throw UsageError("absorbed clause requested with unmatched coordinates");
      break;
    case Regime::C2: fill_c2(q, cfg); break;
    case Regime::C3: fill_c3(q, cfg); break;
  }
  return q;
}

QMatrix build_q_matrix(StrategyId id, const PairConfig& cfg) {
  const int m = cfg.m();
  const int d = cfg.params().d;
  switch (id) {
    case StrategyId::Optimal: return build_optimal_q(cfg, regime(m, d));
    case StrategyId::Synchronous: {
      QMatrix q(cfg.params());
      for (int i = 0; i < cfg.params().n; ++i) {
        const int shift = cfg.y[i] - cfg.x[i];
        for (int k = 0; k < d; ++k) q.at(i, k, i, ((k + shift) % d + d) % d) = 1.0;
      }
      return q;
    }
    case StrategyId::Independent: {
      QMatrix q(cfg.params());
      fill_matched_identity(q, cfg);
      fill_independent(q, cfg);
      return q;
    }
    case StrategyId::PairwiseClassic: {
      if (m % 2 == 0) return build_optimal_q(cfg, m == 0 ? Regime::Absorbed : Regime::C2);
      QMatrix q(cfg.params());
      fill_matched_identity(q, cfg);
      fill_independent(q, cfg);
      return q;
    }
  }
  throw UsageError("unknown strategy id");
}

RealRateSchedule lump_rates(const QMatrix& q, const PairConfig& cfg) {
  const WalkParams& p = cfg.params();
  const int d = p.d;
  RealRateSchedule out;
  for (int i = 0; i < p.n; ++i) {
    for (int k = 0; k < d; ++k) {
      for (int j = 0; j < p.n; ++j) {
        for (int l = 0; l < d; ++l) {
          const double w = q.at(i, k, j, l);
          if (w == 0.0) continue;
          int delta;
          if (i == j) {
            delta = int(k != l) - int(cfg.x[i] != cfg.y[i]);
          } else {
            delta = int(k != cfg.y[i]) - int(cfg.x[i] != cfg.y[i]) + int(cfg.x[j] != l) - int(cfg.x[j] != cfg.y[j]);
          }
          if (delta != 0) out(delta) += w / (d - 1);
        }
      }
    }
  }
  return out;
}

}  // namespace coadapt
