#pragma once

// Minimal index, minimal conditional expectation and the canonical states of a
// connected inclusion with finite-dimensional centers, all read off from the
// Perron–Frobenius data of its dimension matrix.

#include <Eigen/Core>

#include "minidx/algebra.hpp"
#include "minidx/spectral.hpp"

namespace minidx {

inline constexpr double kIdentityTol = 1e-9;

// Markovian decomposition of a conditional expectation E: M → N.
// lambda(i, j) is the weight with E(p_i) q_j = λ_ij q_j; block_index(i, j) is
// Ind(E_ij) of the expectation between the cut-down factors.
struct ExpectationWeights {
  Eigen::MatrixXd lambda;
  Eigen::MatrixXd block_index;
};

// ω_l(q_j) = left(j), ω_r(p_i) = right(i), and spherical(i, j) is the weight
// ω_s puts on the (i, j) block of N′∩M.
struct CanonicalStates {
  Eigen::VectorXd left;
  Eigen::VectorXd right;
  Eigen::MatrixXd spherical;
};

// Ind(E) = Σ_i values(i) p_i.
struct CentralIndex {
  Eigen::VectorXd values;

  double norm() const { return values.maxCoeff(); }
};

double minimal_index(const DimensionMatrix& d, double tol = kDefaultPfTol);

// λ_ij = (d_ij / d) √μ_i / √ν_j and block_index = d_ij².
ExpectationWeights minimal_expectation_weights(const DimensionMatrix& d, const PFData& pf);
ExpectationWeights minimal_expectation_weights(const DimensionMatrix& d,
                                               double tol = kDefaultPfTol);

CanonicalStates canonical_states(const DimensionMatrix& d, const PFData& pf);
CanonicalStates canonical_states(const DimensionMatrix& d, double tol = kDefaultPfTol);

// c_i = Σ_j Ind(E_ij) / λ_ij over the support of row i.
//
// Throws Error(support_mismatch) when shapes differ or λ is nonzero off the
// support of D, Error(singular_weight) when λ_ij <= 0 on the support, and
// Error(invalid_value) when a block index is below 1.
CentralIndex index_of_expectation(const DimensionMatrix& d, const ExpectationWeights& e);

// Dimension matrix of N ⊂ L from those of N ⊂ M (inner) and M ⊂ L (outer),
// i.e. the product outer · inner. Throws Error(shape) if not composable.
DimensionMatrix compose(const DimensionMatrix& inner, const DimensionMatrix& outer);

// Reassembles a dimension matrix from two cuts by complementary projections of
// N′∩M. The pieces may have zero rows or columns; the sum may not.
// Throws Error(shape) on mismatched shapes.
DimensionMatrix cut_sum(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second);

}  // namespace minidx
