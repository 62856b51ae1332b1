#pragma once

// Data-parallel double-precision kernels used by the uniformization mixer and
// the log-space binomial sums. Each kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version; the active one is chosen once at runtime from
// CPUID (override with COADAPT_SIMD=scalar).

#include <span>
#include <string_view>

namespace coadapt::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*exp)(std::span<const double>, std::span<double>);
  double (*weighted_exp_sum)(std::span<const double>, std::span<const double>);
  double (*positive_exp_diff_sum)(std::span<const double>, std::span<const double>);
};

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void exp(std::span<const double> x, std::span<double> out);
double weighted_exp_sum(std::span<const double> log_w, std::span<const double> v);
double positive_exp_diff_sum(std::span<const double> log_p, std::span<const double> log_q);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define COADAPT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void exp(std::span<const double> x, std::span<double> out);
double weighted_exp_sum(std::span<const double> log_w, std::span<const double> v);
double positive_exp_diff_sum(std::span<const double> log_p, std::span<const double> log_q);
}  // namespace avx2
#endif

bool cpu_supports(Isa isa);
const KernelTable& table(Isa isa);
/// Kernels selected for this process.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) { return active().dot(a, b); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) { active().axpy(alpha, x, y); }
inline void exp(std::span<const double> x, std::span<double> out) { active().exp(x, out); }
/// sum_k exp(log_w[k]) * v[k]
inline double weighted_exp_sum(std::span<const double> log_w, std::span<const double> v) {
  return active().weighted_exp_sum(log_w, v);
}
/// sum_k max(0, exp(log_p[k]) - exp(log_q[k]))
inline double positive_exp_diff_sum(std::span<const double> log_p, std::span<const double> log_q) {
  return active().positive_exp_diff_sum(log_p, log_q);
}

}  // namespace coadapt::simd
