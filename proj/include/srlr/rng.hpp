#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace srlr {

/// SplitMix64 finalizer; used to derive independent per-replication seeds
/// from a master seed so parallel and serial Monte Carlo runs agree.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replication `index` under `master`.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic N(0,1) stream: mt19937_64 driving the basic Box-Muller
/// transform on (0,1] uniforms. The draw order is part of the simulation
/// contract (same build + seed => bit-identical streams); bit compatibility
/// across languages is not promised.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on (0, 1]: top 53 bits, shifted away from zero.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; produces values in pairs.
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace srlr
