#pragma once

#include <cmath>
#include <cstdint>

namespace conic {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: draw k of stream `key` is splitmix64(key + k*phi).
/// Streams for independent trials are derived with `derive`, so results do
/// not depend on the order in which trials are evaluated.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static CounterRng derive(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next_u64() { return splitmix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  int index(int n) { return static_cast<int>(uniform() * n); }

  bool coin(double p = 0.5) { return uniform() < p; }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace conic
