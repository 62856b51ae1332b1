#pragma once

#include <string_view>
#include <vector>

namespace coadapt {

enum class CurveKind { Empirical, Exact };

inline std::string_view curve_kind_name(CurveKind k) { return k == CurveKind::Exact ? "exact" : "empirical"; }

/// P(tau > t) on a time grid, estimated or computed.
struct SurvivalCurve {
  std::vector<double> t_grid;
  std::vector<double> value;
  std::vector<double> half_width_95;
  std::vector<double> half_width_3sigma;
  long replicates = 0;
  CurveKind kind = CurveKind::Empirical;
  /// Certified absolute error bound (exact kind only).
  double error = 0.0;
};

}  // namespace coadapt
