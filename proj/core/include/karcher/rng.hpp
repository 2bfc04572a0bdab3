#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace karcher {

/// SplitMix64 is the one random generator used across the repository.
/// It is seedable, 64-bit, and splittable: split() derives an independent
/// substream from the parent's output stream, so (seed, split path) fully
/// determines every draw. Gaussians come from Box-Muller on 53-bit uniforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  SplitMix64 split() { return SplitMix64(next()); }

  /// Uniform in the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Index i with probability cumulative[i] - cumulative[i-1];
  /// `cumulative` is nondecreasing with back() == 1.
  int pick(const std::vector<double>& cumulative) {
    const double u = uniform01();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const int idx = static_cast<int>(it - cumulative.begin());
    return std::min(idx, static_cast<int>(cumulative.size()) - 1);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace karcher
