#include "coadapt/state.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace coadapt;

namespace {

// State with index `code` in base-d digit order.
State decode(WalkParams p, int code) {
  std::vector<int> c(static_cast<std::size_t>(p.n));
  for (auto& v : c) {
    v = code % p.d;
    code /= p.d;
  }
  return State(p, c);
}

int digit_mismatches(int a, int b, int d, int n) {
  int count = 0;
  for (int i = 0; i < n; ++i, a /= d, b /= d) count += (a % d) != (b % d);
  return count;
}

}  // namespace

TEST_CASE("params and states reject out-of-range input") {
  CHECK_THROWS_AS(WalkParams(1, 3), UsageError);
  CHECK_THROWS_AS(WalkParams(3, 0), UsageError);
  const WalkParams p(3, 2);
  CHECK_THROWS_AS(State(p, {0, 3}), UsageError);
  CHECK_THROWS_AS(State(p, {0}), UsageError);
  State s(p);
  CHECK_THROWS_AS(s.set(2, 0), UsageError);
  CHECK_THROWS_AS(s.set(0, -1), UsageError);
  CHECK_THROWS_AS(hamming(State(p), State(WalkParams(3, 3))), UsageError);
  CHECK_THROWS_AS(hamming(State(p), State(WalkParams(4, 2))), UsageError);
}

TEST_CASE("unit vectors") {
  const WalkParams p(4, 5);
  const State e = State::unit(p, 2);
  for (int i = 0; i < 5; ++i) CHECK(e[i] == (i == 2 ? 1 : 0));
  CHECK(hamming(State(p), e) == 1);
}

TEST_CASE("hamming and partition agree with digit enumeration") {
  for (int d : {2, 3}) {
    const int n = 3;
    const WalkParams p(d, n);
    const int size = static_cast<int>(std::pow(d, n));
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) {
        const State x = decode(p, a), y = decode(p, b);
        const int h = digit_mismatches(a, b, d, n);
        CHECK(hamming(x, y) == h);
        const PairConfig cfg = partition(x, y);
        REQUIRE(cfg.m() == h);
        REQUIRE(cfg.unmatched.size() + cfg.matched.size() == static_cast<std::size_t>(n));
        std::set<int> all(cfg.unmatched.begin(), cfg.unmatched.end());
        all.insert(cfg.matched.begin(), cfg.matched.end());
        CHECK(all.size() == static_cast<std::size_t>(n));
        for (int i : cfg.unmatched) CHECK(x[i] != y[i]);
        for (int i : cfg.matched) CHECK(x[i] == y[i]);
        CHECK(std::is_sorted(cfg.unmatched.begin(), cfg.unmatched.end()));
        CHECK(std::is_sorted(cfg.matched.begin(), cfg.matched.end()));
      }
    }
  }
}

TEST_CASE("hamming is a metric") {
  const WalkParams p(3, 6);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const State x = sample_uniform_state(p, 3 * s), y = sample_uniform_state(p, 3 * s + 1),
                z = sample_uniform_state(p, 3 * s + 2);
    CHECK(hamming(x, x) == 0);
    CHECK(hamming(x, y) == hamming(y, x));
    CHECK(hamming(x, z) <= hamming(x, y) + hamming(y, z));
  }
}

TEST_CASE("replicate streams are reproducible and distinct") {
  Rng a = make_stream(7, 3), b = make_stream(7, 3), c = make_stream(7, 4), e = make_stream(8, 3);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
  CHECK(first != e());
}

TEST_CASE("uniform01 stays in [0, 1) and has the right mean") {
  Rng rng = make_stream(1, 0);
  double sum = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / N == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("exponential sampler matches mean and variance") {
  Rng rng = make_stream(2, 0);
  const double rate = 2.5;
  const int N = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = exponential(rng, rate);
    REQUIRE(std::isfinite(x));
    REQUIRE(x >= 0.0);
    s += x;
    s2 += x * x;
  }
  const double mean = s / N, var = s2 / N - mean * mean;
  CHECK(std::abs(mean - 1 / rate) < 5 * (1 / rate) / std::sqrt(N));
  CHECK(var == doctest::Approx(1 / (rate * rate)).epsilon(0.03));
}

TEST_CASE("uniform states have uniform coordinates") {
  const WalkParams p(4, 8);
  std::vector<long> count(4, 0);
  for (std::uint64_t s = 0; s < 5000; ++s) {
    const State x = sample_uniform_state(p, s);
    for (int v : x.coords()) ++count[static_cast<std::size_t>(v)];
  }
  const double expected = 5000.0 * 8 / 4;
  double chi2 = 0.0;
  for (long c : count) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 16.27);  // chi-square(3) upper 0.001 point
}
