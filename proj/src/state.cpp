#include "coadapt/state.hpp"

#include <cmath>

namespace coadapt {

State::State(WalkParams p, std::vector<int> coords) : params_(p), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != p.n) throw UsageError("State: coordinate count differs from n");
  for (int v : coords_)
    if (v < 0 || v >= p.d) throw UsageError("State: coordinate value outside [0, d)");
}

State State::unit(WalkParams p, int i) {
  State s(p);
  s.set(i, 1);
  return s;
}

void State::set(int i, int value) {
  if (i < 0 || i >= params_.n) throw UsageError("State::set: index out of range");
  if (value < 0 || value >= params_.d) throw UsageError("State::set: value outside [0, d)");
  coords_[static_cast<std::size_t>(i)] = value;
}

namespace {
void check_compatible(const State& x, const State& y) {
  if (!(x.params() == y.params())) throw UsageError("states have different (d, n)");
}
}  // namespace

int hamming(const State& x, const State& y) {
  check_compatible(x, y);
  int count = 0;
  for (int i = 0; i < x.size(); ++i) count += x[i] != y[i];
  return count;
}

PairConfig partition(const State& x, const State& y) {
  check_compatible(x, y);
  PairConfig cfg{x, y, {}, {}};
  for (int i = 0; i < x.size(); ++i) (x[i] != y[i] ? cfg.unmatched : cfg.matched).push_back(i);
  return cfg;
}

double exponential(Rng& rng, double rate) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-uniform01(rng)) / rate;
}

State sample_uniform_state(WalkParams p, Rng& rng) {
  std::uniform_int_distribution<int> coord(0, p.d - 1);
  std::vector<int> c(static_cast<std::size_t>(p.n));
  for (auto& v : c) v = coord(rng);
  return State(p, std::move(c));
}

State sample_uniform_state(WalkParams p, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return sample_uniform_state(p, rng);
}

}  // namespace coadapt
