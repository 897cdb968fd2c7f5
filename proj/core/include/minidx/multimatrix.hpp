#pragma once

// Multi-matrix inclusions: Markov trace, the trace-preserving expectation,
// extremality / super-extremality and the enumerator of super-extremal
// inclusions with a prescribed index.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "minidx/algebra.hpp"
#include "minidx/minindex.hpp"

namespace minidx {

// s(i): trace of a minimal projection of M_{h_i}; t = Λᵗ s restricts τ to N.
// Normalized as a state: Σ_i h_i s_i = 1.
struct MarkovTrace {
  Eigen::VectorXd s;
  Eigen::VectorXd t;
};

struct ExtremalityReport {
  bool extremal = false;
  bool super_extremal = false;
  std::optional<std::int64_t> index;  // present iff super_extremal
  Eigen::MatrixXd lambda_tau;
  Eigen::MatrixXd lambda_min;
};

// All of the following throw Error(not_connected) on disconnected input.
MarkovTrace markov_trace(const BratteliInclusion& b, double tol = kDefaultPfTol);

// λ^τ_ij = Λ_ij s_i / (Λᵗs)_j, block_index = Λ_ij².
ExpectationWeights trace_expectation_weights(const BratteliInclusion& b,
                                             double tol = kDefaultPfTol);

// Compares λ^τ with λ⁰ entrywise. Both are computed independently, so this is
// a genuine cross-check even though the answer is always true.
bool is_extremal(const BratteliInclusion& b, double tol = kIdentityTol);

// Exact test: ΛᵗΛk is a rational multiple of k. No floating point.
bool is_super_extremal(const BratteliInclusion& b);

// Σh² / Σk² as an exact integer. Throws Error(not_super_extremal) if the
// predicate fails and Error(integrality) if the ratio is not an integer or
// disagrees with the proportionality factor.
std::int64_t super_extremal_index(const BratteliInclusion& b);

ExtremalityReport extremality_report(const BratteliInclusion& b, double tol = kIdentityTol);

// Composite of N ⊂ M (inner) and M ⊂ L (outer): Λ = Λ_outer Λ_inner.
// Throws Error(shape) unless h_inner == k_outer.
BratteliInclusion compose(const BratteliInclusion& inner, const BratteliInclusion& outer);

// Representative of the class of b under simultaneous relabeling of the
// summands of N and M: k is nondecreasing, rows of Λ are sorted, and the
// column order is the lexicographically least one.
BratteliInclusion canonical_form(const BratteliInclusion& b);

struct EnumerationBounds {
  int max_summands = 3;        // n, m <= max_summands
  std::int64_t max_entry = 3;  // Λ_ij <= max_entry
  std::int64_t max_dim = 8;    // k_j, h_i <= max_dim
};

// Every connected inclusion within bounds, one per relabeling class, sorted by
// (n, m, k, rows of Λ). Throws Error(invalid_value) if a bound is < 1.
std::vector<BratteliInclusion> enumerate_connected(const EnumerationBounds& bounds);

// Connected super-extremal inclusions within bounds whose index is
// target_index, in the same canonical form and order.
std::vector<BratteliInclusion> enumerate_super_extremal(std::int64_t target_index,
                                                        const EnumerationBounds& bounds);

}  // namespace minidx
