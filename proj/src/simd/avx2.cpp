// Compiled with -mavx2 -mfma; only called after a CPUID check.
#include "coadapt/simd.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cassert>
#include <cmath>

namespace coadapt::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// 2^k for integral k in [-1022, 1023], k held in a double.
inline __m256d pow2i(__m256d k) {
  const __m256d magic = _mm256_set1_pd(0x1.0p52);
  __m256d biased = _mm256_add_pd(_mm256_add_pd(k, _mm256_set1_pd(1023.0)), magic);
  __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  return _mm256_castsi256_pd(bits);
}

// exp(x) to within a couple of ulp: Cody-Waite reduction x = n ln2 + r,
// |r| <= ln2/2, degree-13 Taylor polynomial, then scaling by 2^n split in two
// factors so subnormal results are reachable.
inline __m256d exp4(__m256d x) {
  const __m256d hi_cut = _mm256_set1_pd(709.782712893384);
  const __m256d lo_cut = _mm256_set1_pd(-745.2);
  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_cut);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(0x1.71547652b82fep0)),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(0x1.62e42fefa39efp-1), xc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(0x1.abc9e3b39803fp-56), r);

  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
      1.0 / 6.0,          0.5,               1.0,              1.0};
  __m256d p = _mm256_set1_pd(kInvFact[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));

  __m256d n1 = _mm256_round_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)), _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  __m256d n2 = _mm256_sub_pd(n, n1);
  __m256d out = _mm256_mul_pd(_mm256_mul_pd(p, pow2i(n1)), pow2i(n2));

  out = _mm256_blendv_pd(out, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ));
  out = _mm256_blendv_pd(out, _mm256_set1_pd(HUGE_VAL), _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ));
  return out;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i + 4]), _mm256_loadu_pd(&b[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(a, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void exp(std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(&out[i], exp4(_mm256_loadu_pd(&x[i])));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

double weighted_exp_sum(std::span<const double> log_w, std::span<const double> v) {
  assert(log_w.size() == v.size());
  const std::size_t n = v.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(exp4(_mm256_loadu_pd(&log_w[i])), _mm256_loadu_pd(&v[i]), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += std::exp(log_w[i]) * v[i];
  return s;
}

double positive_exp_diff_sum(std::span<const double> log_p, std::span<const double> log_q) {
  assert(log_p.size() == log_q.size());
  const std::size_t n = log_p.size();
  __m256d acc = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d diff = _mm256_sub_pd(exp4(_mm256_loadu_pd(&log_p[i])), exp4(_mm256_loadu_pd(&log_q[i])));
    acc = _mm256_add_pd(acc, _mm256_max_pd(diff, zero));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::max(0.0, std::exp(log_p[i]) - std::exp(log_q[i]));
  return s;
}

}  // namespace coadapt::simd::avx2
