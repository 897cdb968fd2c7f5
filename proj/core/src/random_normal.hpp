#pragma once

// Box-Muller on raw engine bits. std::normal_distribution is not specified
// bit-for-bit across standard libraries; this keeps seeded runs portable.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace minidx::detail {

inline double unit_open(std::mt19937_64& rng) {
  // 53 random bits mapped into (0, 1).
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
  const double u = unit_open(rng);
  const double v = unit_open(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace minidx::detail
