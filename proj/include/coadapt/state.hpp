#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace coadapt {

/// Raised for invalid parameters, mismatched dimensions and similar caller errors.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Walk on G_d^n: n coordinates, each a vertex of the complete graph on d vertices.
struct WalkParams {
  int d = 2;
  int n = 1;

  WalkParams() = default;
  WalkParams(int d_, int n_) : d(d_), n(n_) {
    if (d < 2) throw UsageError("WalkParams: d must be >= 2");
    if (n < 1) throw UsageError("WalkParams: n must be >= 1");
  }
  friend bool operator==(const WalkParams&, const WalkParams&) = default;
};

/// A point of G_d^n. Coordinates are 0-based values in [0, d).
class State {
 public:
  State() = default;
  /// The all-zero state.
  explicit State(WalkParams p) : params_(p), coords_(static_cast<std::size_t>(p.n), 0) {}
  State(WalkParams p, std::vector<int> coords);

  /// e_i: zero everywhere except value 1 at coordinate i.
  static State unit(WalkParams p, int i);

  const WalkParams& params() const { return params_; }
  int size() const { return params_.n; }
  int operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  void set(int i, int value);
  std::span<const int> coords() const { return coords_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  WalkParams params_;
  std::vector<int> coords_;
};

/// Hamming distance |x - y|.
int hamming(const State& x, const State& y);

/// Coupled pair with its unmatched set U (x(i) != y(i)) and matched set M.
struct PairConfig {
  State x;
  State y;
  std::vector<int> unmatched;  // ascending
  std::vector<int> matched;    // ascending

  int m() const { return static_cast<int>(unmatched.size()); }
  const WalkParams& params() const { return x.params(); }
};

PairConfig partition(const State& x, const State& y);

/// splitmix64 finaliser; used to derive independent per-replicate streams.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/// Generator for replicate `index` of a run with master seed `seed`.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Exponential with the given rate (> 0).
double exponential(Rng& rng, double rate);

State sample_uniform_state(WalkParams p, Rng& rng);
State sample_uniform_state(WalkParams p, std::uint64_t seed);

}  // namespace coadapt
