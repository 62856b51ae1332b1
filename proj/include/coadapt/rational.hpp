#pragma once

// Exact univariate polynomials and rational functions over a field.
//
// The coefficient field F must provide +, -, *, /, ==, construction from int,
// and be exact (mpq_class, or RationalFunction<mpq_class> for a nested
// symbolic parameter). Rational functions are kept in canonical form:
// gcd(num, den) = 1 and den monic, so structural equality is mathematical
// equality.

#include <gmpxx.h>

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coadapt {

template <class F>
struct FieldTraits {
  static bool is_zero(const F& x) { return x == F(0); }
  static bool is_one(const F& x) { return x == F(1); }
};

template <class F>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(F constant) {  // NOLINT(google-explicit-constructor)
    if (!FieldTraits<F>::is_zero(constant)) c_.push_back(std::move(constant));
  }
  explicit Polynomial(std::vector<F> ascending) : c_(std::move(ascending)) { trim(); }

  /// x + shift
  static Polynomial linear(F slope, F shift) { return Polynomial({std::move(shift), std::move(slope)}); }
  static Polynomial variable() { return linear(F(1), F(0)); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const F& coeff(std::size_t i) const { return c_[i]; }
  F coeff_or_zero(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
  const F& leading() const { return c_.back(); }
  const std::vector<F>& coeffs() const { return c_; }

  F operator()(const F& x) const {
    F acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = F(acc * x) + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F(c_[i] + o.c_[i]);
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F(c_[i] - o.c_[i]);
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) { return Polynomial() - a; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> out(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = F(out[i + j] + F(a.c_[i] * b.c_[j]));
    return Polynomial(std::move(out));
  }

  Polynomial scaled(const F& s) const {
    if (FieldTraits<F>::is_zero(s)) return {};
    std::vector<F> out = c_;
    for (auto& x : out) x = F(x * s);
    return Polynomial(std::move(out));
  }

  /// Euclidean division: *this = q * divisor + r with deg r < deg divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
    if (degree() < divisor.degree()) return {Polynomial(), *this};
    std::vector<F> rem = c_;
    const std::size_t dd = divisor.c_.size() - 1;
    std::vector<F> quot(rem.size() - dd, F(0));
    const F& lead = divisor.leading();
    for (std::size_t k = rem.size(); k-- > dd;) {
      if (FieldTraits<F>::is_zero(rem[k])) continue;
      F q = F(rem[k] / lead);
      for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] = F(rem[k - dd + j] - F(q * divisor.c_[j]));
      quot[k - dd] = std::move(q);
    }
    rem.resize(dd);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    return scaled(F(F(1) / leading()));
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<F> out(c_.size() - 1, F(0));
    for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = F(c_[i] * F(static_cast<int>(i)));
    return Polynomial(std::move(out));
  }

  /// Coefficients of p(x0 + h) as a polynomial in h.
  Polynomial taylor_shift(const F& x0) const {
    std::vector<F> a = c_;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) a[j - 1] = F(a[j - 1] + F(x0 * a[j]));
    return Polynomial(std::move(a));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && FieldTraits<F>::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

template <class F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

template <class F>
class RationalFunction {
 public:
  using Poly = Polynomial<F>;

  RationalFunction() : num_(), den_(F(1)) {}
  RationalFunction(int c) : num_(F(c)), den_(F(1)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(F c) : num_(std::move(c)), den_(F(1)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Poly num) : num_(std::move(num)), den_(F(1)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }

  static RationalFunction variable() { return RationalFunction(Poly::variable()); }

  /// num / prod_i (x + shifts[i]) in canonical form. Common factors are
  /// cancelled by root testing, so no polynomial gcd is computed.
  static RationalFunction over_linear_factors(Poly num, const std::vector<F>& shifts) {
    RationalFunction r;
    if (num.is_zero()) return r;
    Poly den(F(1));
    for (const auto& s : shifts) {
      Poly factor = Poly::linear(F(1), s);
      if (num.degree() > 0 && FieldTraits<F>::is_zero(num(F(-s)))) {
        num = num.divmod(factor).first;
      } else {
        den = den * factor;
      }
    }
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  F operator()(const F& x) const {
    F dv = den_(x);
    if (FieldTraits<F>::is_zero(dv)) throw std::domain_error("rational function evaluated at a pole");
    return F(num_(x) / dv);
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("rational function division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// First K+1 Taylor coefficients about x0 (c_k = f^(k)(x0) / k!).
  std::vector<F> taylor(const F& x0, std::size_t order) const {
    Poly n = num_.taylor_shift(x0);
    Poly d = den_.taylor_shift(x0);
    if (d.is_zero() || FieldTraits<F>::is_zero(d.coeff(0)))
      throw std::domain_error("rational function has a pole at the expansion point");
    std::vector<F> out(order + 1, F(0));
    for (std::size_t k = 0; k <= order; ++k) {
      F acc = n.coeff_or_zero(k);
      for (std::size_t j = 1; j <= k; ++j) acc = F(acc - F(d.coeff_or_zero(j) * out[k - j]));
      out[k] = F(acc / d.coeff(0));
    }
    return out;
  }

 private:
  void canonicalize() {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly(F(1));
      return;
    }
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_.divmod(g).first;
      den_ = den_.divmod(g).first;
    }
    F lead = den_.leading();
    if (!FieldTraits<F>::is_one(lead)) {
      F inv = F(F(1) / lead);
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Poly num_;
  Poly den_;
};

template <class F>
struct FieldTraits<RationalFunction<F>> {
  static bool is_zero(const RationalFunction<F>& x) { return x.is_zero(); }
  static bool is_one(const RationalFunction<F>& x) {
    return x.num().degree() == 0 && x.den().degree() == 0 && FieldTraits<F>::is_one(x.num().coeff(0));
  }
};

using QPoly = Polynomial<mpq_class>;
using QRational = RationalFunction<mpq_class>;
/// Rational functions in alpha whose coefficients are rational functions in d.
using SymbolicRational = RationalFunction<QRational>;

/// Canonical integer-coefficient rendering "P(var)/Q(var)": numerator and
/// denominator scaled to primitive integer polynomials, positive leading
/// denominator coefficient. Terms are written in descending degree.
std::string to_string(const QRational& f, std::string_view var = "alpha");
std::string to_string(const QPoly& p, std::string_view var = "alpha");
/// Parse the rendering produced by to_string(QRational).
QRational parse_rational(std::string_view text, std::string_view var = "alpha");

/// Rendering for the nested symbolic form; coefficients are printed as
/// canonical rational functions of `inner_var`.
std::string to_string(const SymbolicRational& f, std::string_view var = "alpha", std::string_view inner_var = "d");

/// Substitute an integer value for the inner parameter.
QRational specialize(const SymbolicRational& f, const mpq_class& inner_value);

}  // namespace coadapt
