#include "coadapt/laplace.hpp"

#include <stdexcept>

namespace coadapt {

namespace {

template <class F>
using RF = RationalFunction<F>;
template <class F>
using Poly = Polynomial<F>;

// V(m) = P[m] / prod_{j=1}^{m} (alpha + e[j]), kept unreduced; e[j] is the
// exit rate of level j.
template <class F>
struct Ladder {
  std::vector<Poly<F>> P;
  std::vector<F> e;

  Ladder(const F& d, int m_max, int d_int) {
    const F dm1 = F(d - F(1));
    P.assign(static_cast<std::size_t>(m_max) + 1, Poly<F>());
    e.assign(static_cast<std::size_t>(m_max) + 1, F(0));
    Poly<F> D(F(1));  // prod_{j < m} (alpha + e[j])
    for (int m = 1; m <= m_max; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      const F mm(m);
      // d_int == 0 marks the symbolic d >= 4 family: C3 only at m = 1.
      const bool c3 = d_int == 0 ? m == 1 : regime(m, d_int) == Regime::C3;
      if (c3) {
        e[mi] = F(F(mm * d) / dm1);
        P[mi] = D + P[mi - 1].scaled(e[mi]);
      } else {
        e[mi] = mm;
        P[mi] = D + (P[mi - 2] * Poly<F>::linear(F(1), e[mi - 1])).scaled(F(mm / dm1)) +
                P[mi - 1].scaled(F(F(mm * F(d - F(2))) / dm1));
      }
      D = D * Poly<F>::linear(F(1), e[mi]);
    }
  }

  std::vector<F> shifts(int m) const { return {e.begin() + 1, e.begin() + 1 + m}; }
  Poly<F> step(int m) const { return Poly<F>::linear(F(1), e[static_cast<std::size_t>(m)]); }

  // Numerator of R(m) over prod_{j<=m}.
  Poly<F> r_num(int m) const {
    const auto mi = static_cast<std::size_t>(m);
    return P[mi] - P[mi - 1] * step(m);
  }
  // Numerator of R(m-1) - R(m) over prod_{j<=m}, m >= 2.
  Poly<F> diff_num(int m) const { return r_num(m - 1) * step(m) - r_num(m); }

  RF<F> V(int m) const { return RF<F>::over_linear_factors(P[static_cast<std::size_t>(m)], shifts(m)); }
  RF<F> R(int m) const { return RF<F>::over_linear_factors(r_num(m), shifts(m)); }
};

// a/b = c/e by cross-multiplication.
template <class F>
bool same(const Poly<F>& a, const Poly<F>& b, const Poly<F>& c, const Poly<F>& e) {
  return a * e == c * b;
}

template <class F>
bool c2_identity(const F& d, std::span<const RF<F>> V, int m) {
  // (m + alpha)(d-1) V(m) = (d-1) + m V(m-2) + m(d-2) V(m-1), denominators cleared.
  const F dm1 = F(d - F(1));
  const auto& a = V[static_cast<std::size_t>(m)];
  const auto& b = V[static_cast<std::size_t>(m) - 1];
  const auto& c = V[static_cast<std::size_t>(m) - 2];
  Poly<F> lhs_n = Poly<F>::linear(dm1, F(F(m) * dm1)) * a.num();
  const Poly<F>& lhs_d = a.den();
  Poly<F> rhs_n = b.den() * c.den().scaled(dm1) + c.num().scaled(F(m)) * b.den() +
                  b.num().scaled(F(F(m) * F(d - F(2)))) * c.den();
  Poly<F> rhs_d = b.den() * c.den();
  return same(lhs_n, lhs_d, rhs_n, rhs_d);
}

template <class F>
bool three_term_identity(const F& d, std::span<const RF<F>> V, int m) {
  // (m+1+alpha)(d-1) R(m+1) = m R(m-1) + [m(d-2) - 1] R(m), with
  // R(k) = V(k) - V(k-1) and V(-1) read as 0.
  const F dm1 = F(d - F(1));
  auto v = [&](int k) -> const RF<F>& { return V[static_cast<std::size_t>(k)]; };
  auto num = [&](int k) { return k < 0 ? Poly<F>() : v(k).num(); };
  auto den = [&](int k) { return k < 0 ? Poly<F>(F(1)) : v(k).den(); };
  // Everything over the common denominator prod_{k=m-2}^{m+1} den(k).
  auto over = [&](int k) {
    Poly<F> acc = num(k);
    for (int j = m - 2; j <= m + 1; ++j)
      if (j != k) acc = acc * den(j);
    return acc;
  };
  auto r = [&](int k) { return over(k) - over(k - 1); };
  Poly<F> lhs = Poly<F>::linear(dm1, F(F(m + 1) * dm1)) * r(m + 1);
  Poly<F> rhs = r(m - 1).scaled(F(m)) + r(m).scaled(F(F(F(m) * F(d - F(2))) - F(1)));
  return lhs == rhs;
}

}  // namespace

std::vector<QRational> laplace_V_table(int d, int m_max) {
  if (d < 2) throw UsageError("laplace: d must be >= 2");
  if (m_max < 0) throw UsageError("laplace: m must be >= 0");
  Ladder<mpq_class> L(mpq_class(d), m_max, d);
  std::vector<QRational> V;
  for (int m = 0; m <= m_max; ++m) V.push_back(L.V(m));
  return V;
}

QRational laplace_V(int d, int m) { return laplace_V_table(d, m).back(); }

std::vector<QRational> laplace_R_table(int d, int m_max) {
  if (d < 2) throw UsageError("laplace: d must be >= 2");
  if (m_max < 0) throw UsageError("laplace: m must be >= 0");
  Ladder<mpq_class> L(mpq_class(d), m_max, d);
  std::vector<QRational> R(1);
  for (int m = 1; m <= m_max; ++m) R.push_back(L.R(m));
  return R;
}

QRational laplace_R(int d, int m) {
  if (m < 1) throw UsageError("laplace_R: m must be >= 1");
  return laplace_R_table(d, m).back();
}

LaplaceZeros laplace_zero_pattern(int d, int m_max) {
  if (d < 2) throw UsageError("laplace: d must be >= 2");
  if (m_max < 0) throw UsageError("laplace: m must be >= 0");
  Ladder<mpq_class> L(mpq_class(d), m_max, d);
  LaplaceZeros z;
  z.r_zero.assign(static_cast<std::size_t>(m_max) + 1, false);
  z.diff_zero.assign(static_cast<std::size_t>(m_max) + 1, false);
  for (int m = 1; m <= m_max; ++m) z.r_zero[static_cast<std::size_t>(m)] = L.r_num(m).is_zero();
  for (int m = 2; m <= m_max; ++m) z.diff_zero[static_cast<std::size_t>(m)] = L.diff_num(m).is_zero();
  return z;
}

std::vector<SymbolicRational> laplace_V_symbolic_table(int m_max) {
  if (m_max < 0) throw UsageError("laplace: m must be >= 0");
  Ladder<QRational> L(QRational::variable(), m_max, 0);
  std::vector<SymbolicRational> V;
  for (int m = 0; m <= m_max; ++m) V.push_back(L.V(m));
  return V;
}

bool c2_recursion_holds(std::span<const QRational> V, int d, int m) {
  if (m < 2 || static_cast<std::size_t>(m) >= V.size()) throw UsageError("c2_recursion_holds: level out of range");
  return c2_identity<mpq_class>(mpq_class(d), V, m);
}

bool c3_recursion_holds(std::span<const QRational> V, int d, int m) {
  if (m < 1 || static_cast<std::size_t>(m) >= V.size()) throw UsageError("c3_recursion_holds: level out of range");
  // (md + alpha(d-1)) V(m) = (d-1) + md V(m-1)
  const mpq_class dm1(d - 1), md(m * d);
  const auto& a = V[static_cast<std::size_t>(m)];
  const auto& b = V[static_cast<std::size_t>(m) - 1];
  return same(QPoly::linear(dm1, md) * a.num(), a.den(), b.den().scaled(dm1) + b.num().scaled(md), b.den());
}

bool r_three_term_holds(std::span<const QRational> V, int d, int m) {
  if (m < 1 || static_cast<std::size_t>(m) + 1 >= V.size()) throw UsageError("r_three_term_holds: level out of range");
  return three_term_identity<mpq_class>(mpq_class(d), V, m);
}

bool c2_recursion_holds_symbolic(std::span<const SymbolicRational> V, int m) {
  if (m < 2 || static_cast<std::size_t>(m) >= V.size()) throw UsageError("c2_recursion_holds: level out of range");
  return c2_identity<QRational>(QRational::variable(), V, m);
}

bool r_three_term_holds_symbolic(std::span<const SymbolicRational> V, int m) {
  if (m < 1 || static_cast<std::size_t>(m) + 1 >= V.size()) throw UsageError("r_three_term_holds: level out of range");
  return three_term_identity<QRational>(QRational::variable(), V, m);
}

std::vector<mpq_class> expected_tau_table(int d, int m_max) {
  if (d < 2) throw UsageError("expected_tau: d must be >= 2");
  if (m_max < 0) throw UsageError("expected_tau: m must be >= 0");
  std::vector<mpq_class> E(static_cast<std::size_t>(m_max) + 1, mpq_class(0));
  for (int m = 1; m <= m_max; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    if (regime(m, d) == Regime::C3) {
      E[mi] = mpq_class(d - 1, m * d) + E[mi - 1];
    } else {
      E[mi] = mpq_class(1, m) + (E[mi - 2] + mpq_class(d - 2) * E[mi - 1]) / mpq_class(d - 1);
    }
    E[mi].canonicalize();
  }
  return E;
}

mpq_class expected_tau(int d, int m) { return expected_tau_table(d, m).back(); }

std::vector<double> expected_tau_table_real(int d, int m_max) {
  if (d < 2) throw UsageError("expected_tau: d must be >= 2");
  std::vector<double> E(static_cast<std::size_t>(m_max) + 1, 0.0);
  const double dm1 = d - 1.0;
  for (int m = 1; m <= m_max; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    if (regime(m, d) == Regime::C3)
      E[mi] = dm1 / (static_cast<double>(m) * d) + E[mi - 1];
    else
      E[mi] = 1.0 / m + (E[mi - 2] + (d - 2.0) * E[mi - 1]) / dm1;
  }
  return E;
}

mpq_class mk_bound_mean(int k, int m) {
  if (k < 1) throw UsageError("mk_bound_mean: k must be >= 1");
  if (m < 0) throw UsageError("mk_bound_mean: m must be >= 0");
  mpq_class sum(0);
  for (int i = 1; i <= m; ++i) sum += mpq_class(1, k * i);
  sum.canonicalize();
  return sum;
}

TotalMonotoneReport check_total_monotone(const QRational& f, int order, std::span<const mpq_class> alpha_grid) {
  if (order < 0) throw UsageError("check_total_monotone: order must be >= 0");
  TotalMonotoneReport rep;
  rep.max_order = order;
  mpz_class factorial;
  for (const auto& a : alpha_grid) {
    auto c = f.taylor(a, static_cast<std::size_t>(order));  // throws at a pole
    std::vector<mpq_class> row;
    factorial = 1;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) factorial *= k;
      mpq_class v = c[static_cast<std::size_t>(k)] * factorial;
      if (k % 2 == 1) v = -v;
      if (v < 0 && rep.passed) {
        rep.passed = false;
        rep.failing_order = k;
        rep.failing_alpha = a;
      }
      row.push_back(v);
    }
    rep.signed_derivatives.push_back(std::move(row));
  }
  return rep;
}

}  // namespace coadapt
