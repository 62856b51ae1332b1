#include "coadapt/rational.hpp"
#include "coadapt/state.hpp"

#include "doctest.h"

#include <vector>

using namespace coadapt;

namespace {

QPoly random_poly(Rng& rng, int degree) {
  std::vector<mpq_class> c;
  for (int i = 0; i <= degree; ++i) {
    mpq_class x(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 5) + 1);
    x.canonicalize();
    c.push_back(x);
  }
  if (c.back() == 0) c.back() = 1;
  return QPoly(c);
}

mpq_class q(long a, long b = 1) {
  mpq_class x(a, b);
  x.canonicalize();
  return x;
}

}  // namespace

TEST_CASE("polynomial ring operations agree with pointwise evaluation") {
  Rng rng = make_stream(5, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const QPoly a = random_poly(rng, static_cast<int>(rng() % 5)), b = random_poly(rng, static_cast<int>(rng() % 4));
    for (long x = -3; x <= 3; ++x) {
      const mpq_class X = q(x, 2);
      CHECK((a + b)(X) == a(X) + b(X));
      CHECK((a - b)(X) == a(X) - b(X));
      CHECK((a * b)(X) == a(X) * b(X));
      CHECK(a.scaled(q(3, 7))(X) == q(3, 7) * a(X));
    }
  }
}

TEST_CASE("division with remainder") {
  Rng rng = make_stream(5, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const QPoly a = random_poly(rng, static_cast<int>(rng() % 7)), b = random_poly(rng, 1 + static_cast<int>(rng() % 3));
    const auto [quo, rem] = a.divmod(b);
    CHECK(quo * b + rem == a);
    CHECK(rem.degree() < b.degree());
  }
}

TEST_CASE("gcd recovers a planted common factor") {
  Rng rng = make_stream(5, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const QPoly g = random_poly(rng, 2).monic();
    const QPoly a = g * random_poly(rng, 2), b = g * random_poly(rng, 3);
    const QPoly h = gcd(a, b);
    CHECK(a.divmod(h).second.is_zero());
    CHECK(b.divmod(h).second.is_zero());
    CHECK(h.divmod(g).second.is_zero());
  }
}

TEST_CASE("rational functions are kept in lowest terms with monic denominator") {
  const QPoly x = QPoly::variable();
  const QRational f(x * x - QPoly(q(1)), (x - QPoly(q(1))).scaled(q(2)));
  CHECK(f.num() == (x + QPoly(q(1))).scaled(q(1, 2)));
  CHECK(f.den() == QPoly(q(1)));
  const QRational g(QPoly(q(3)), x.scaled(q(4)) + QPoly(q(2)));
  CHECK(g.den().leading() == 1);
  CHECK(g * (QRational(1) / g) == QRational(1));
  CHECK((g - g).is_zero());
  CHECK_THROWS_AS(QRational(QPoly(q(1)), QPoly()), std::domain_error);
  CHECK_THROWS_AS(g(q(-1, 2)), std::domain_error);
  CHECK_THROWS_AS(g / QRational(), std::domain_error);
}

TEST_CASE("linear-factor construction agrees with the gcd path") {
  Rng rng = make_stream(5, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<mpq_class> shifts;
    const int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) shifts.push_back(q(static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3)));
    QPoly num = random_poly(rng, static_cast<int>(rng() % 3));
    // plant some of the factors in the numerator
    for (int i = 0; i < k; ++i)
      if (rng() % 2) num = num * QPoly::linear(q(1), shifts[static_cast<std::size_t>(i)]);
    QPoly den(q(1));
    for (const auto& s : shifts) den = den * QPoly::linear(q(1), s);
    CHECK(QRational::over_linear_factors(num, shifts) == QRational(num, den));
  }
}

TEST_CASE("rendering round-trips through the parser") {
  Rng rng = make_stream(5, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const QRational f(random_poly(rng, static_cast<int>(rng() % 4)), random_poly(rng, static_cast<int>(rng() % 4)));
    CHECK(parse_rational(to_string(f)) == f);
  }
  CHECK(parse_rational(to_string(QRational())) == QRational());
  CHECK_THROWS(parse_rational("1/(alpha"));
}

TEST_CASE("taylor coefficients match derivatives") {
  const QPoly x = QPoly::variable();
  const QRational f(QPoly(q(3)) + x, x * x + x.scaled(q(5)) + QPoly(q(6)));
  for (long x0 = 0; x0 <= 4; ++x0) {
    const auto c = f.taylor(q(x0), 2);
    const QPoly n = f.num(), d = f.den();
    const mpq_class X = q(x0);
    CHECK(c[0] == f(X));
    const mpq_class d1 = (n.derivative()(X) * d(X) - n(X) * d.derivative()(X)) / (d(X) * d(X));
    CHECK(c[1] == d1);
  }
  CHECK_THROWS_AS(f.taylor(q(-2), 1), std::domain_error);
}

TEST_CASE("nested rational functions specialize to the integer case") {
  using SPoly = Polynomial<QRational>;
  const QRational d = QRational::variable();
  // (d - 1) / ((d - 1) alpha + d)
  const SymbolicRational v(SPoly(d - QRational(1)), SPoly::linear(d - QRational(1), d));
  for (int k = 2; k <= 6; ++k) {
    const QRational want(QPoly(q(k - 1)), QPoly::linear(q(k - 1), q(k)));
    CHECK(specialize(v, q(k)) == want);
  }
  CHECK(to_string(v).find('d') != std::string::npos);
}
