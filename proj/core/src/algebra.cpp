#include "minidx/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minidx/errors.hpp"

namespace minidx {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::shape: return "shape";
    case Errc::consistency: return "consistency";
    case Errc::non_unital: return "non_unital";
    case Errc::invalid_value: return "invalid_value";
    case Errc::not_connected: return "not_connected";
    case Errc::convergence: return "convergence";
    case Errc::support_mismatch: return "support_mismatch";
    case Errc::singular_weight: return "singular_weight";
    case Errc::not_super_extremal: return "not_super_extremal";
    case Errc::integrality: return "integrality";
    case Errc::not_markovian: return "not_markovian";
    case Errc::bad_density: return "bad_density";
    case Errc::quasi_basis: return "quasi_basis";
    case Errc::not_central: return "not_central";
    case Errc::not_in_commutant: return "not_in_commutant";
    case Errc::law_violation: return "law_violation";
    case Errc::scale: return "scale";
  }
  return "unknown";
}

MultiMatrixAlgebra::MultiMatrixAlgebra(IntVector dims) : dims_(std::move(dims)) {
  if (dims_.size() == 0) {
    throw Error(Errc::invalid_value, "multi-matrix algebra needs at least one summand");
  }
  for (Eigen::Index j = 0; j < dims_.size(); ++j) {
    if (dims_(j) < 1) {
      std::ostringstream os;
      os << "summand " << j << " has dimension " << dims_(j) << " < 1";
      throw Error(Errc::invalid_value, os.str());
    }
  }
}

std::int64_t MultiMatrixAlgebra::algebraic_dimension() const noexcept {
  return dims_.squaredNorm();
}

std::int64_t MultiMatrixAlgebra::hilbert_dimension() const noexcept { return dims_.sum(); }

DimensionMatrix::DimensionMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw Error(Errc::shape, "dimension matrix is empty");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < 0.0 || (v != 0.0 && v < 1.0 - 1e-12)) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") = " << v
           << " is neither 0 nor a subfactor dimension >= 1";
        throw Error(Errc::invalid_value, os.str());
      }
    }
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if ((entries_.row(i).array() == 0.0).all()) {
      throw Error(Errc::non_unital, "row " + std::to_string(i) + " is zero");
    }
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    if ((entries_.col(j).array() == 0.0).all()) {
      throw Error(Errc::non_unital, "column " + std::to_string(j) + " is zero");
    }
  }
}

BratteliInclusion validate_bratteli(const IntVector& k, const IntVector& h,
                                    const IntMatrix& lambda) {
  if (lambda.rows() != h.size() || lambda.cols() != k.size()) {
    std::ostringstream os;
    os << "Lambda is " << lambda.rows() << "x" << lambda.cols() << " but |h| = " << h.size()
       << " and |k| = " << k.size();
    throw Error(Errc::shape, os.str());
  }
  MultiMatrixAlgebra small(k);
  MultiMatrixAlgebra large(h);
  if ((lambda.array() < 0).any()) {
    throw Error(Errc::invalid_value, "Lambda has a negative entry");
  }
  const IntVector image = lambda * k;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (image(i) != h(i)) {
      std::ostringstream os;
      os << "(Lambda k)_" << i << " = " << image(i) << " but h_" << i << " = " << h(i);
      throw Error(Errc::consistency, os.str());
    }
  }
  for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
    if ((lambda.row(i).array() == 0).all()) {
      throw Error(Errc::non_unital, "row " + std::to_string(i) + " of Lambda is zero");
    }
  }
  for (Eigen::Index j = 0; j < lambda.cols(); ++j) {
    if ((lambda.col(j).array() == 0).all()) {
      throw Error(Errc::non_unital, "column " + std::to_string(j) + " of Lambda is zero");
    }
  }
  return BratteliInclusion(std::move(small), std::move(large), lambda);
}

DimensionMatrix dimension_matrix_of(const BratteliInclusion& b) {
  return DimensionMatrix(b.lambda().cast<double>());
}

namespace {

// Components of the bipartite graph rows ⊔ cols with an edge where nonzero(i, j).
template <class NonZero>
std::vector<Component> bipartite_components(Eigen::Index rows, Eigen::Index cols,
                                            NonZero nonzero) {
  std::vector<int> row_seen(static_cast<std::size_t>(rows), 0);
  std::vector<int> col_seen(static_cast<std::size_t>(cols), 0);
  std::vector<Component> out;

  for (Eigen::Index start = 0; start < rows; ++start) {
    if (row_seen[start]) continue;
    Component comp;
    // Stack entries: (is_row, index).
    std::vector<std::pair<bool, Eigen::Index>> stack{{true, start}};
    row_seen[start] = 1;
    while (!stack.empty()) {
      auto [is_row, v] = stack.back();
      stack.pop_back();
      if (is_row) {
        comp.rows.push_back(v);
        for (Eigen::Index j = 0; j < cols; ++j) {
          if (!col_seen[j] && nonzero(v, j)) {
            col_seen[j] = 1;
            stack.emplace_back(false, j);
          }
        }
      } else {
        comp.cols.push_back(v);
        for (Eigen::Index i = 0; i < rows; ++i) {
          if (!row_seen[i] && nonzero(i, v)) {
            row_seen[i] = 1;
            stack.emplace_back(true, i);
          }
        }
      }
    }
    std::sort(comp.rows.begin(), comp.rows.end());
    std::sort(comp.cols.begin(), comp.cols.end());
    out.push_back(std::move(comp));
  }
  // Columns with no edges only occur for invalid input; keep them visible anyway.
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (!col_seen[j]) out.push_back(Component{{}, {j}});
  }
  return out;
}

}  // namespace

std::vector<Component> connected_components(const DimensionMatrix& d) {
  const auto& e = d.entries();
  return bipartite_components(e.rows(), e.cols(),
                              [&](Eigen::Index i, Eigen::Index j) { return e(i, j) != 0.0; });
}

std::vector<Component> connected_components(const BratteliInclusion& b) {
  const auto& l = b.lambda();
  return bipartite_components(l.rows(), l.cols(),
                              [&](Eigen::Index i, Eigen::Index j) { return l(i, j) != 0; });
}

bool is_connected(const DimensionMatrix& d) { return connected_components(d).size() == 1; }
bool is_connected(const BratteliInclusion& b) { return connected_components(b).size() == 1; }

std::vector<CommutantBlock> relative_commutant_shape(const BratteliInclusion& b) {
  std::vector<CommutantBlock> out;
  const auto& l = b.lambda();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      if (l(i, j) != 0) out.push_back({i, j, l(i, j)});
    }
  }
  return out;
}

std::int64_t relative_commutant_dimension(const BratteliInclusion& b) {
  return b.lambda().squaredNorm();
}

BratteliInclusion restrict_to(const BratteliInclusion& b, const Component& c) {
  const auto rows = static_cast<Eigen::Index>(c.rows.size());
  const auto cols = static_cast<Eigen::Index>(c.cols.size());
  IntVector k(cols), h(rows);
  IntMatrix lambda(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a) h(a) = b.large().dims()(c.rows[a]);
  for (Eigen::Index j = 0; j < cols; ++j) k(j) = b.small().dims()(c.cols[j]);
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index j = 0; j < cols; ++j) lambda(a, j) = b.lambda()(c.rows[a], c.cols[j]);
  }
  return validate_bratteli(k, h, lambda);
}

DimensionMatrix restrict_to(const DimensionMatrix& d, const Component& c) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(c.rows.size()),
                      static_cast<Eigen::Index>(c.cols.size()));
  for (std::size_t a = 0; a < c.rows.size(); ++a) {
    for (std::size_t j = 0; j < c.cols.size(); ++j) {
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) = d(c.rows[a], c.cols[j]);
    }
  }
  return DimensionMatrix(std::move(out));
}

}  // namespace minidx
