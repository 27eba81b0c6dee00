#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace maxharm {

using cplx = std::complex<double>;

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Compensated (Neumaier) accumulator for norm and average sums.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Counter-free splittable RNG used everywhere randomness is needed;
/// identical streams on every platform for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Derive an independent stream for a sub-component.
  SplitMix64 split(std::uint64_t salt) {
    return SplitMix64(next_u64() ^ (0x632be59bd9b4e019ULL * (salt + 1)));
  }

 private:
  std::uint64_t state_;
};

/// Distance from u to the nearest lattice translate of 0 on a ring of
/// circumference L.
inline double wrap_dist(double u, double L) {
  double r = std::remainder(u, L);
  return std::abs(r);
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int int_log2(int n) {
  int k = 0;
  while ((1 << (k + 1)) <= n) ++k;
  return k;
}

[[noreturn]] inline void fail(const std::string& msg) { throw std::invalid_argument(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

}  // namespace maxharm
