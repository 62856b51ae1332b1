#include "coadapt/simd.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace coadapt::simd::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void exp(std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(x[i]);
}

double weighted_exp_sum(std::span<const double> log_w, std::span<const double> v) {
  assert(log_w.size() == v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::exp(log_w[i]) * v[i];
  return acc;
}

double positive_exp_diff_sum(std::span<const double> log_p, std::span<const double> log_q) {
  assert(log_p.size() == log_q.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) acc += std::max(0.0, std::exp(log_p[i]) - std::exp(log_q[i]));
  return acc;
}

}  // namespace coadapt::simd::scalar
