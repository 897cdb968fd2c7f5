#pragma once

// Brute-force oracle: multi-matrix inclusions realized as explicit
// block-diagonal matrices, conditional expectations assembled from their
// Markovian data, Kosaki indices from explicit quasi-bases, and a direct
// numerical minimization of ‖Ind(E)‖.
//
// Layout: summand i of M acts on ℂ^{h_i} = ⊕_j ℂ^{k_j} ⊗ ℂ^{Λ_ij}, cells in
// increasing j, and inside a cell the basis vector (a, b) sits at a·Λ_ij + b.
// N embeds as y ↦ ⊕_j y_j ⊗ 1_{Λ_ij}.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "minidx/algebra.hpp"
#include "minidx/minindex.hpp"

namespace minidx {

using cplx = std::complex<double>;

// Element of a multi-matrix algebra: one square block per summand.
class BlockDiag {
 public:
  BlockDiag() = default;
  explicit BlockDiag(std::vector<Eigen::MatrixXcd> blocks) : blocks_(std::move(blocks)) {}

  static BlockDiag zero(const IntVector& dims);
  static BlockDiag identity(const IntVector& dims);
  // Matrix unit e_{rs} of summand `summand`.
  static BlockDiag unit(const IntVector& dims, std::size_t summand, Eigen::Index r,
                        Eigen::Index s);

  std::size_t summands() const noexcept { return blocks_.size(); }
  Eigen::MatrixXcd& block(std::size_t i) { return blocks_[i]; }
  const Eigen::MatrixXcd& block(std::size_t i) const { return blocks_[i]; }

  BlockDiag adjoint() const;
  cplx trace() const;
  // Largest entry modulus.
  double max_abs() const;

  BlockDiag& operator+=(const BlockDiag& o);
  BlockDiag& operator-=(const BlockDiag& o);
  BlockDiag& operator*=(cplx s);

  friend BlockDiag operator+(BlockDiag a, const BlockDiag& b) { return a += b; }
  friend BlockDiag operator-(BlockDiag a, const BlockDiag& b) { return a -= b; }
  friend BlockDiag operator*(BlockDiag a, cplx s) { return a *= s; }
  friend BlockDiag operator*(cplx s, BlockDiag a) { return a *= s; }
  friend BlockDiag operator*(const BlockDiag& a, const BlockDiag& b);

 private:
  std::vector<Eigen::MatrixXcd> blocks_;
};

// Matrix units e_{rs} of every summand, summand-major.
std::vector<BlockDiag> matrix_unit_basis(const IntVector& dims);

// {e_{0a}, e_{a0}} per summand: generates the algebra.
std::vector<BlockDiag> algebra_generators(const IntVector& dims);

class ConcreteInclusion {
 public:
  const BratteliInclusion& inclusion() const noexcept { return b_; }
  const IntVector& small_dims() const noexcept { return b_.small().dims(); }
  const IntVector& large_dims() const noexcept { return b_.large().dims(); }

  // Start of cell (i, j) inside summand i.
  Eigen::Index cell_offset(Eigen::Index i, Eigen::Index j) const { return offsets_(i, j); }
  // Position of cell (i, j) in commutant_blocks(), or -1 when Λ_ij = 0.
  Eigen::Index cell_index(Eigen::Index i, Eigen::Index j) const { return cell_ids_(i, j); }

  BlockDiag embed(const BlockDiag& y) const;

  // p_i.
  BlockDiag central_projection_large(std::size_t i) const;
  // ι(q_j).
  BlockDiag central_projection_small(std::size_t j) const;
  // p_i ι(q_j).
  BlockDiag cell_projection(Eigen::Index i, Eigen::Index j) const;

  const std::vector<CommutantBlock>& commutant_blocks() const noexcept { return blocks_; }
  // 1_{k_j} ⊗ e_{bc} in cell (i, j): a matrix unit of N′∩M.
  BlockDiag commutant_unit(const CommutantBlock& cell, Eigen::Index b, Eigen::Index c) const;

  // dim ι(N)′∩M, obtained numerically from the commutator equations.
  std::int64_t commutant_dimension() const noexcept { return commutant_dimension_; }

  // Largest ‖[ι(g), x]‖ over the generators g of N.
  double commutator_defect(const BlockDiag& x) const;

  friend ConcreteInclusion realize_inclusion(const BratteliInclusion& b);

 private:
  explicit ConcreteInclusion(BratteliInclusion b);

  BratteliInclusion b_;
  IntMatrix offsets_;
  IntMatrix cell_ids_;
  std::vector<CommutantBlock> blocks_;
  std::int64_t commutant_dimension_ = 0;
};

// Builds the standard multiplicity embedding and checks that it is a unital
// *-homomorphism with commutant of dimension Σ Λ_ij² (Error(law_violation)
// otherwise, which would be a bug).
ConcreteInclusion realize_inclusion(const BratteliInclusion& b);

// E(x) = Σ_ij λ_ij σ_ij((id ⊗ φ_ρij)(q_j x p_i q_j)), with φ_ρ(z) = Tr(ρ z).
class ConcreteExpectation {
 public:
  const ConcreteInclusion& inclusion() const noexcept { return c_; }
  const Eigen::MatrixXd& lambda() const noexcept { return lambda_; }
  // One density per nonzero cell, in relative_commutant_shape order.
  const std::vector<Eigen::MatrixXcd>& densities() const noexcept { return densities_; }

  // E(x) as an element of N.
  BlockDiag apply_small(const BlockDiag& x) const;
  // ι(E(x)).
  BlockDiag apply(const BlockDiag& x) const { return c_.embed(apply_small(x)); }

  // E as a matrix on the matrix-unit coordinates of M (column r = E(basis r)).
  Eigen::MatrixXcd matrix() const;

  friend ConcreteExpectation build_expectation(const ConcreteInclusion& c,
                                               const Eigen::MatrixXd& lambda,
                                               std::vector<Eigen::MatrixXcd> densities);

 private:
  ConcreteExpectation(ConcreteInclusion c, Eigen::MatrixXd lambda,
                      std::vector<Eigen::MatrixXcd> densities)
      : c_(std::move(c)), lambda_(std::move(lambda)), densities_(std::move(densities)) {}

  ConcreteInclusion c_;
  Eigen::MatrixXd lambda_;
  std::vector<Eigen::MatrixXcd> densities_;
};

// Throws Error(not_markovian) unless λ is column-stochastic (1e-10) with
// support equal to that of Λ, and Error(bad_density) unless every density is
// a positive-definite Λ_ij × Λ_ij matrix of trace 1 (1e-12). The result is
// checked for E(1) = 1, E² = E, N-bimodularity and positivity on samples.
ConcreteExpectation build_expectation(const ConcreteInclusion& c, const Eigen::MatrixXd& lambda,
                                      std::vector<Eigen::MatrixXcd> densities);

// 1/Λ_ij per cell: the densities of the trace on each N′∩M block.
std::vector<Eigen::MatrixXcd> uniform_densities(const ConcreteInclusion& c);

// Expectation with λ⁰ and uniform densities.
ConcreteExpectation minimal_expectation(const ConcreteInclusion& c);

// Ind(E) = Σ_l u_l u_l* for the quasi-basis u = (λ_ij ρ_b)^{-1/2} |e_r⟩⟨e_a0 ⊗ f_b|
// (r over ℂ^{h_i}, f_b eigenvectors of ρ_ij). Throws Error(quasi_basis) if
// Σ_l u_l E(u_l* x) ≠ x on a basis of M (1e-8), Error(not_central) if the
// sum is not central (1e-8).
CentralIndex quasi_basis_index(const ConcreteExpectation& e);

// Smooth surrogate for log ‖Ind(E)‖ used by the minimizer:
// F_β(θ) = β⁻¹ log Σ_i exp(β log c_i(θ)), c_i = Σ_j Tr(ρ_ij⁻¹) / λ_ij.
// θ holds, per column j, logits of the rows in its support (the first pinned
// to 0), then per cell with Λ_ij > 1 the Cholesky factor L of ρ ∝ LL*:
// log L_pp for p ≥ 1 (L_00 = 1) followed by (Re, Im) of L_pq for p > q.
class IndexObjective {
 public:
  explicit IndexObjective(const ConcreteInclusion& c);

  Eigen::Index dimension() const noexcept { return dim_; }

  Eigen::MatrixXd lambda(const Eigen::VectorXd& theta) const;
  std::vector<Eigen::MatrixXcd> densities(const Eigen::VectorXd& theta) const;
  // c_i through the closed per-cell formula.
  Eigen::VectorXd central_index(const Eigen::VectorXd& theta) const;

  // +inf when some density has an eigenvalue below 1e-8. grad may be null.
  double evaluate(const Eigen::VectorXd& theta, double beta, Eigen::VectorXd* grad) const;

 private:
  struct Column {
    Eigen::Index j;
    std::vector<Eigen::Index> rows;
    Eigen::Index offset;  // first logit of rows[1..]
  };
  struct Cell {
    Eigen::Index i, j, mult;
    Eigen::Index offset;  // -1 when mult == 1
  };

  Eigen::MatrixXcd cholesky_factor(const Cell& cell, const Eigen::VectorXd& theta) const;

  Eigen::Index rows_ = 0, cols_ = 0, dim_ = 0;
  std::vector<Column> columns_;
  std::vector<Cell> cells_;  // relative_commutant_shape order
};

struct NumericalMinimum {
  Eigen::MatrixXd lambda;
  std::vector<Eigen::MatrixXcd> densities;
  double value = 0.0;
};

inline constexpr int kDefaultRestarts = 16;

// Multistart minimization of max_i Ind(E)_i over Markovian λ (softmax per
// column) and densities (Cholesky factors). value is ‖Ind(E)‖ of the best
// point, recomputed through quasi_basis_index. Throws Error(not_connected) and
// Error(convergence) if no restart reaches a finite value.
NumericalMinimum minimize_index_numerically(const ConcreteInclusion& c,
                                            int restarts = kDefaultRestarts,
                                            std::uint64_t seed = 0);

// ω_s(x) = ω_l(E⁰(x)) for x in N′∩M. Throws Error(not_in_commutant) when x
// fails to commute with ι(N) to 1e-10.
double spherical_state_eval(const ConcreteInclusion& c, const BlockDiag& x);

}  // namespace minidx
