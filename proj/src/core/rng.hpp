#pragma once

#include <cstdint>
#include <random>

namespace obslearn {

// Seeded draws that are identical on every platform: mt19937_64 bits mapped
// through the open unit interval and the normal quantile. (The standard
// library's normal_distribution is implementation-defined.)
class deterministic_rng {
public:
  explicit deterministic_rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    // 53 random bits into (0,1), never exactly 0 or 1.
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(double mean = 0.0, double sd = 1.0);

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

}  // namespace obslearn
