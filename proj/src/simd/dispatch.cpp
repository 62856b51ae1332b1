#include "coadapt/simd.hpp"

#include <cstdlib>
#include <string_view>

namespace coadapt::simd {

namespace {

constexpr KernelTable kScalar{scalar::dot, scalar::axpy, scalar::exp, scalar::weighted_exp_sum,
                              scalar::positive_exp_diff_sum};
#ifdef COADAPT_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{avx2::dot, avx2::axpy, avx2::exp, avx2::weighted_exp_sum, avx2::positive_exp_diff_sum};
#endif

Isa select() {
  if (const char* env = std::getenv("COADAPT_SIMD"); env && std::string_view(env) == "scalar") return Isa::Scalar;
  return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#ifdef COADAPT_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
#ifdef COADAPT_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2) return kAvx2;
#endif
  (void)isa;
  return kScalar;
}

Isa active_isa() {
  static const Isa isa = select();
  return isa;
}

const KernelTable& active() { return table(active_isa()); }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace coadapt::simd
