#pragma once

#include <cstdint>
#include <limits>

namespace rankvarma {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator. Output i of stream s under seed m is a pure function of
// (m, s, i), so replications can be drawn in any order or in parallel and still match.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal by Box-Muller; the second variate is cached.
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rankvarma
