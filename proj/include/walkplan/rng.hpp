#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace walkplan {

/// Seeded random source passed explicitly to every stochastic routine.
///
/// Only the raw 64-bit engine output is used; uniform and normal variates are
/// derived here so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  /// Child generator with an independent stream, derived from this
  /// generator's seed and `stream` only (not from its current state).
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi] (inclusive).
  int uniform_int(int lo, int hi);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  /// Index drawn with probability proportional to `weights` (all >= 0, sum > 0).
  std::size_t weighted_index(std::span<const double> weights);

  template <class It>
  void shuffle(It first, It last) {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
      const auto j = static_cast<decltype(i)>(next_u64() % static_cast<std::uint64_t>(i + 1));
      using std::swap;
      swap(first[i], first[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace walkplan
