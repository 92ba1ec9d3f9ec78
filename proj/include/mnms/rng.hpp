#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mnms {

/// Counter-based pseudo-random generator (splitmix64 finalizer over a keyed
/// counter). Output n of stream s is a pure function of (seed, s, n), so
/// sequences can be sharded or random-accessed without changing results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed + kGolden * (stream + 1))) {}

  std::uint64_t value_at(std::uint64_t counter) const { return mix64(key_ + kGolden * counter); }
  std::uint64_t next() { return value_at(counter_++); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, 1) from an explicit counter position.
  double uniform_at(std::uint64_t counter) const {
    return static_cast<double>(value_at(counter) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the paired sine draw is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  static std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mnms
