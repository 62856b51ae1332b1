#pragma once

// Co-adapted coupling strategies on G_d^n.
//
// A strategy is described at two levels:
//   * lumped: the jump rates lambda(m, m+s), s in {-2..2}, of the unmatched
//     count N, which is autonomous for every built-in strategy;
//   * full: the (nd)x(nd) doubly-stochastic control matrix Q for a given
//     coupled configuration. An event of the (i,k)(j,l) stream fires at rate
//     q/(d-1) and sets X(i) = k, Y(j) = l.

#include "coadapt/state.hpp"

#include <gmpxx.h>

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace coadapt {

enum class StrategyId { Optimal, Independent, Synchronous, PairwiseClassic };

StrategyId parse_strategy(std::string_view name);
std::string_view strategy_name(StrategyId id);
inline constexpr std::array<StrategyId, 4> kAllStrategies = {StrategyId::Optimal, StrategyId::Independent,
                                                             StrategyId::Synchronous, StrategyId::PairwiseClassic};

/// Which clause of the optimal coupling governs level m.
enum class Regime { Absorbed, C2, C3 };

std::string_view regime_name(Regime r);

/// C3 iff m odd and m < 2(d-1)/(d-2) (always, for odd m, when d = 2).
Regime regime(int m, int d);

/// Jump rates of N out of level m, indexed by s + 2 for s in {-2..2}.
template <class T>
struct BasicRateSchedule {
  std::array<T, 5> lam{};

  T& operator()(int s) { return lam[static_cast<std::size_t>(s + 2)]; }
  const T& operator()(int s) const { return lam[static_cast<std::size_t>(s + 2)]; }

  T total_exit() const { return T((*this)(-2) + (*this)(-1) + (*this)(1) + (*this)(2)); }
  friend bool operator==(const BasicRateSchedule&, const BasicRateSchedule&) = default;
};

using RateSchedule = BasicRateSchedule<mpq_class>;
using RealRateSchedule = BasicRateSchedule<double>;

RealRateSchedule to_real(const RateSchedule& r);

/// Membership in L_d^n together with (d-1) lam(-2) <= m.
bool in_constraint_set(const RateSchedule& r, int m, int d);
bool in_constraint_set(const RealRateSchedule& r, int m, int d, double tol = 1e-12);

RateSchedule optimal_rates(int m, int d);
RateSchedule competitor_rates(StrategyId id, int m, int d);
RateSchedule strategy_rates(StrategyId id, int m, int d);

/// Dense (nd)x(nd) control matrix; row/column index (i, k) -> i*d + k.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(WalkParams p) : p_(p), q_(static_cast<std::size_t>(dim() * dim()), 0.0) {}

  static QMatrix identity(WalkParams p);

  const WalkParams& params() const { return p_; }
  int dim() const { return p_.n * p_.d; }
  int index(int i, int k) const { return i * p_.d + k; }

  double& operator()(int row, int col) { return q_[static_cast<std::size_t>(row * dim() + col)]; }
  double operator()(int row, int col) const { return q_[static_cast<std::size_t>(row * dim() + col)]; }
  double at(int i, int k, int j, int l) const { return (*this)(index(i, k), index(j, l)); }
  double& at(int i, int k, int j, int l) { return (*this)(index(i, k), index(j, l)); }

  /// Largest |row sum - 1| and |column sum - 1|.
  double stochasticity_defect() const;
  bool doubly_stochastic(double tol = 1e-12) const;

 private:
  WalkParams p_;
  std::vector<double> q_;
};

/// Optimal control matrix for an explicit clause. Throws UsageError when C2
/// pairing is requested with fewer than two unmatched coordinates.
QMatrix build_optimal_q(const PairConfig& cfg, Regime clause);
QMatrix build_q_matrix(StrategyId id, const PairConfig& cfg);

/// Lumped rates induced by Q, by applying every (row, column) transition to
/// the configuration and classifying its effect on N.
RealRateSchedule lump_rates(const QMatrix& q, const PairConfig& cfg);

}  // namespace coadapt
