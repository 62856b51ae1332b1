#include "coadapt/rational.hpp"

#include <cctype>

namespace coadapt {

namespace {

/// Primitive integer rendering of a pair (num, den) that share a common scale.
std::pair<std::vector<mpz_class>, std::vector<mpz_class>> integer_pair(const QPoly& num, const QPoly& den) {
  mpz_class l = 1;
  for (const auto* p : {&num, &den})
    for (const auto& c : p->coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> n, d;
  mpz_class g = 0;
  for (const auto& c : num.coeffs()) {
    n.emplace_back(mpz_class(c.get_num() * (l / c.get_den())));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.back().get_mpz_t());
  }
  for (const auto& c : den.coeffs()) {
    d.emplace_back(mpz_class(c.get_num() * (l / c.get_den())));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.back().get_mpz_t());
  }
  if (g != 0 && g != 1) {
    for (auto& x : n) x /= g;
    for (auto& x : d) x /= g;
  }
  if (!d.empty() && d.back() < 0) {
    for (auto& x : n) x = -x;
    for (auto& x : d) x = -x;
  }
  return {n, d};
}

std::string render_terms(const std::vector<std::string>& coeff_text, const std::vector<int>& sign,
                         std::string_view var) {
  std::string out;
  bool first = true;
  for (std::size_t k = coeff_text.size(); k-- > 0;) {
    if (coeff_text[k].empty()) continue;
    const bool neg = sign[k] < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    const bool unit = coeff_text[k] == "1";
    if (k == 0 || !unit) out += coeff_text[k];
    if (k > 0) {
      if (!unit) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return first ? "0" : out;
}

std::string render_integer_poly(const std::vector<mpz_class>& c, std::string_view var) {
  std::vector<std::string> text(c.size());
  std::vector<int> sign(c.size(), 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    sign[k] = sgn(c[k]);
    text[k] = mpz_class(abs(c[k])).get_str();
  }
  return render_terms(text, sign, var);
}

class PolyParser {
 public:
  PolyParser(std::string_view s, std::string_view var) : s_(s), var_(var) {}

  QPoly parse_poly() {
    std::vector<mpq_class> coeffs;
    skip_ws();
    bool first = true;
    while (pos_ < s_.size() && s_[pos_] != ')') {
      int sign = 1;
      skip_ws();
      if (peek() == '-' || peek() == '+') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected + or -");
      }
      first = false;
      mpz_class c = 1;
      bool have_coeff = false;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        c = read_int();
        have_coeff = true;
        skip_ws();
        if (peek() == '*') {
          ++pos_;
          skip_ws();
        } else {
          add(coeffs, 0, sign * c);
          continue;
        }
      }
      if (s_.substr(pos_, var_.size()) != var_) fail(have_coeff ? "expected variable" : "expected term");
      pos_ += var_.size();
      std::size_t power = 1;
      if (peek() == '^') {
        ++pos_;
        power = read_int().get_ui();
      }
      add(coeffs, power, sign * c);
      skip_ws();
    }
    return QPoly(std::move(coeffs));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ == s_.size();
  }

 private:
  static void add(std::vector<mpq_class>& coeffs, std::size_t k, const mpz_class& v) {
    if (coeffs.size() <= k) coeffs.resize(k + 1, mpq_class(0));
    coeffs[k] += v;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  mpz_class read_int() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected integer");
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_rational: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const QPoly& p, std::string_view var) {
  auto [n, d] = integer_pair(p, QPoly(mpq_class(1)));
  std::string body = render_integer_poly(n, var);
  if (d.front() != 1) body = "(" + body + ")/" + d.front().get_str();
  return body;
}

std::string to_string(const QRational& f, std::string_view var) {
  auto [n, d] = integer_pair(f.num(), f.den());
  return "(" + render_integer_poly(n, var) + ")/(" + render_integer_poly(d, var) + ")";
}

QRational parse_rational(std::string_view text, std::string_view var) {
  PolyParser p(text, var);
  p.expect('(');
  QPoly num = p.parse_poly();
  p.expect(')');
  p.expect('/');
  p.expect('(');
  QPoly den = p.parse_poly();
  p.expect(')');
  if (!p.at_end()) throw std::invalid_argument("parse_rational: trailing characters");
  return QRational(std::move(num), std::move(den));
}

std::string to_string(const SymbolicRational& f, std::string_view var, std::string_view inner_var) {
  auto render = [&](const Polynomial<QRational>& p) {
    std::vector<std::string> text(p.coeffs().size());
    std::vector<int> sign(text.size(), 1);
    for (std::size_t k = 0; k < text.size(); ++k) {
      if (p.coeff(k).is_zero()) continue;
      text[k] = "[" + to_string(p.coeff(k), inner_var) + "]";
    }
    return render_terms(text, sign, var);
  };
  return "(" + render(f.num()) + ")/(" + render(f.den()) + ")";
}

QRational specialize(const SymbolicRational& f, const mpq_class& inner_value) {
  auto eval = [&](const Polynomial<QRational>& p) {
    std::vector<mpq_class> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.push_back(x(inner_value));
    return QPoly(std::move(c));
  };
  return QRational(eval(f.num()), eval(f.den()));
}

}  // namespace coadapt
