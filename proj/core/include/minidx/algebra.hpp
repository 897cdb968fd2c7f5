#pragma once

// Multi-matrix algebras, Bratteli inclusions and abstract dimension matrices.
//
// Conventions: the small algebra N has n summands with dimension vector k,
// the large algebra M has m summands with dimension vector h, and matrices
// describing N ⊂ M are m×n (rows index summands of M, columns summands of N).

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace minidx {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// ⊕_j M_{k_j}(ℂ). Summand indices double as the minimal central projections.
class MultiMatrixAlgebra {
 public:
  // Throws Error(invalid_value) on an empty vector or an entry < 1.
  explicit MultiMatrixAlgebra(IntVector dims);

  std::size_t summands() const noexcept { return static_cast<std::size_t>(dims_.size()); }
  std::int64_t dim(std::size_t j) const { return dims_(static_cast<Eigen::Index>(j)); }
  const IntVector& dims() const noexcept { return dims_; }

  // Σ k_j², the dimension of the algebra as a vector space.
  std::int64_t algebraic_dimension() const noexcept;
  // Σ k_j, the size of the defining block-diagonal representation.
  std::int64_t hilbert_dimension() const noexcept;

 private:
  IntVector dims_;
};

// Unital inclusion N ⊂ M given by an integer multiplicity matrix Λ with Λk = h.
class BratteliInclusion {
 public:
  const MultiMatrixAlgebra& small() const noexcept { return small_; }
  const MultiMatrixAlgebra& large() const noexcept { return large_; }
  const IntMatrix& lambda() const noexcept { return lambda_; }

  Eigen::Index rows() const noexcept { return lambda_.rows(); }
  Eigen::Index cols() const noexcept { return lambda_.cols(); }

  friend BratteliInclusion validate_bratteli(const IntVector& k, const IntVector& h,
                                             const IntMatrix& lambda);

 private:
  BratteliInclusion(MultiMatrixAlgebra small, MultiMatrixAlgebra large, IntMatrix lambda)
      : small_(std::move(small)), large_(std::move(large)), lambda_(std::move(lambda)) {}

  MultiMatrixAlgebra small_;
  MultiMatrixAlgebra large_;
  IntMatrix lambda_;
};

// Nonnegative m×n matrix of subfactor dimensions d_ij; zero marks p_i q_j = 0.
class DimensionMatrix {
 public:
  // Throws Error(invalid_value) on negative, non-finite or 0 < d_ij < 1 entries,
  // Error(shape) on an empty matrix and Error(non_unital) on a zero row/column.
  explicit DimensionMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }

  DimensionMatrix transpose() const { return DimensionMatrix(entries_.transpose()); }

 private:
  Eigen::MatrixXd entries_;
};

// A connected block: summands of M (rows) and of N (columns), ascending.
struct Component {
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;

  friend bool operator==(const Component&, const Component&) = default;
};

// One cell of N′∩M ≅ ⊕_{ij} M_{Λ_ij}(ℂ).
struct CommutantBlock {
  Eigen::Index i;
  Eigen::Index j;
  std::int64_t multiplicity;

  friend bool operator==(const CommutantBlock&, const CommutantBlock&) = default;
};

// Errors: shape (mismatched sizes), invalid_value (dims < 1, Λ < 0),
// consistency (Λk ≠ h), non_unital (zero row or column of Λ).
BratteliInclusion validate_bratteli(const IntVector& k, const IntVector& h,
                                    const IntMatrix& lambda);

// For multi-matrices the matrix dimension is Λ itself.
DimensionMatrix dimension_matrix_of(const BratteliInclusion& b);

bool is_connected(const DimensionMatrix& d);
bool is_connected(const BratteliInclusion& b);

// Rows and columns partitioned into connected blocks of the bipartite support
// graph. Blocks are ordered by their smallest row index.
std::vector<Component> connected_components(const DimensionMatrix& d);
std::vector<Component> connected_components(const BratteliInclusion& b);

// Nonzero cells in row-major order.
std::vector<CommutantBlock> relative_commutant_shape(const BratteliInclusion& b);

// Σ Λ_ij², the dimension of N′∩M.
std::int64_t relative_commutant_dimension(const BratteliInclusion& b);

// Sub-inclusion cut down to one connected block.
BratteliInclusion restrict_to(const BratteliInclusion& b, const Component& c);
DimensionMatrix restrict_to(const DimensionMatrix& d, const Component& c);

}  // namespace minidx
