#pragma once

#include <cstdint>
#include <limits>

namespace mahler {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator: output i of stream s under seed k is a pure
// function of (k, s, i). Independent streams are obtained by changing s, so
// parallel workers never share state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; consumes exactly two outputs per call.
  double normal();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mahler
