#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include <Eigen/Core>

#include "minidx/algebra.hpp"

namespace minidx {

inline constexpr double kDefaultPfTol = 1e-12;
inline constexpr std::int64_t kMaxPfIterations = 1'000'000;

// Perron–Frobenius data of a connected dimension matrix D:
//   DᵗD √ν = d² √ν,  DDᵗ √μ = d² √μ,  ‖√μ‖ = ‖√ν‖ = 1, all entries > 0.
struct PFData {
  double d = 0.0;
  Eigen::VectorXd sqrt_mu;  // length m, indexed by summands of M
  Eigen::VectorXd sqrt_nu;  // length n, indexed by summands of N
  std::int64_t iterations = 0;
};

// Power iteration on DᵗD from the uniform vector. Stops once every component
// of DᵗD√ν − d²√ν is within tol of d²√ν_j (relative, componentwise).
//
// Throws Error(not_connected) when D is disconnected and Error(convergence)
// when max_iterations is exhausted; the message carries a spectral-gap estimate.
PFData pf_data(const DimensionMatrix& d, double tol = kDefaultPfTol,
               std::int64_t max_iterations = kMaxPfIterations);

// Largest singular value of D; disconnected inputs are fine.
double scalar_dimension(const DimensionMatrix& d, double tol = kDefaultPfTol);

struct JonesValue {
  int k = 3;
  friend bool operator==(const JonesValue&, const JonesValue&) = default;
};
struct AtLeastFour {
  friend bool operator==(const AtLeastFour&, const AtLeastFour&) = default;
};
struct Inadmissible {
  friend bool operator==(const Inadmissible&, const Inadmissible&) = default;
};

using IndexClass = std::variant<JonesValue, AtLeastFour, Inadmissible>;

// 4cos²(π/k), computed as 2 + 2cos(2π/k).
double jones_value(int k);

// x >= 4 - tol is AtLeastFour; otherwise the smallest k >= 3 with
// |x - 4cos²(π/k)| <= tol, or Inadmissible.
IndexClass classify_index_value(double x, double tol);

inline std::optional<int> jones_k(const IndexClass& c) {
  if (const auto* j = std::get_if<JonesValue>(&c)) return j->k;
  return std::nullopt;
}

}  // namespace minidx
