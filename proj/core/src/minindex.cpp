#include "minidx/minindex.hpp"

#include <cmath>
#include <sstream>

#include "minidx/errors.hpp"

namespace minidx {

namespace {

void check_cut_piece(const Eigen::MatrixXd& piece) {
  for (Eigen::Index i = 0; i < piece.rows(); ++i) {
    for (Eigen::Index j = 0; j < piece.cols(); ++j) {
      const double v = piece(i, j);
      if (!std::isfinite(v) || v < 0.0 || (v != 0.0 && v < 1.0 - 1e-12)) {
        std::ostringstream os;
        os << "cut entry (" << i << "," << j << ") = " << v << " is not a dimension";
        throw Error(Errc::invalid_value, os.str());
      }
    }
  }
}

}  // namespace

double minimal_index(const DimensionMatrix& d, double tol) {
  const double s = pf_data(d, tol).d;
  return s * s;
}

ExpectationWeights minimal_expectation_weights(const DimensionMatrix& d, const PFData& pf) {
  const auto& D = d.entries();
  ExpectationWeights out{Eigen::MatrixXd::Zero(D.rows(), D.cols()),
                         Eigen::MatrixXd::Zero(D.rows(), D.cols())};
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
      if (D(i, j) == 0.0) continue;
      out.lambda(i, j) = D(i, j) / pf.d * pf.sqrt_mu(i) / pf.sqrt_nu(j);
      out.block_index(i, j) = D(i, j) * D(i, j);
    }
  }
  return out;
}

ExpectationWeights minimal_expectation_weights(const DimensionMatrix& d, double tol) {
  return minimal_expectation_weights(d, pf_data(d, tol));
}

CanonicalStates canonical_states(const DimensionMatrix& d, const PFData& pf) {
  CanonicalStates out;
  out.left = pf.sqrt_nu.array().square();
  out.right = pf.sqrt_mu.array().square();
  out.spherical = (pf.sqrt_mu.asDiagonal() * d.entries() * pf.sqrt_nu.asDiagonal()) / pf.d;
  return out;
}

CanonicalStates canonical_states(const DimensionMatrix& d, double tol) {
  return canonical_states(d, pf_data(d, tol));
}

CentralIndex index_of_expectation(const DimensionMatrix& d, const ExpectationWeights& e) {
  const auto& D = d.entries();
  if (e.lambda.rows() != D.rows() || e.lambda.cols() != D.cols() ||
      e.block_index.rows() != D.rows() || e.block_index.cols() != D.cols()) {
    throw Error(Errc::support_mismatch, "expectation weights do not match the shape of D");
  }
  CentralIndex out{Eigen::VectorXd::Zero(D.rows())};
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
      const double l = e.lambda(i, j);
      if (D(i, j) == 0.0) {
        if (l != 0.0) {
          std::ostringstream os;
          os << "lambda(" << i << "," << j << ") = " << l << " off the support of D";
          throw Error(Errc::support_mismatch, os.str());
        }
        continue;
      }
      if (!(l > 0.0)) {
        std::ostringstream os;
        os << "lambda(" << i << "," << j << ") = " << l
           << " on the support: the expectation is not faithful";
        throw Error(Errc::singular_weight, os.str());
      }
      if (!(e.block_index(i, j) >= 1.0)) {
        throw Error(Errc::invalid_value, "block index below 1");
      }
      out.values(i) += e.block_index(i, j) / l;
    }
  }
  return out;
}

DimensionMatrix compose(const DimensionMatrix& inner, const DimensionMatrix& outer) {
  if (outer.cols() != inner.rows()) {
    std::ostringstream os;
    os << "cannot compose " << inner.rows() << "x" << inner.cols() << " (inner) with "
       << outer.rows() << "x" << outer.cols() << " (outer)";
    throw Error(Errc::shape, os.str());
  }
  return DimensionMatrix(outer.entries() * inner.entries());
}

DimensionMatrix cut_sum(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second) {
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw Error(Errc::shape, "cuts have different shapes");
  }
  check_cut_piece(first);
  check_cut_piece(second);
  return DimensionMatrix(first + second);
}

}  // namespace minidx
