#include "minidx/multimatrix.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "minidx/errors.hpp"
#include "minidx/spectral.hpp"

namespace minidx {

namespace mp = boost::multiprecision;

namespace {

void require_connected(const BratteliInclusion& b) {
  if (!is_connected(b)) throw Error(Errc::not_connected, "inclusion is not connected");
}

// ΛᵗΛk in arbitrary precision.
std::vector<mp::cpp_int> gram_image(const BratteliInclusion& b) {
  const auto& l = b.lambda();
  const auto& k = b.small().dims();
  std::vector<mp::cpp_int> h(static_cast<std::size_t>(l.rows()));
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j < l.cols(); ++j) h[i] += mp::cpp_int(l(i, j)) * k(j);
  }
  std::vector<mp::cpp_int> out(static_cast<std::size_t>(l.cols()));
  for (Eigen::Index j = 0; j < l.cols(); ++j) {
    for (Eigen::Index i = 0; i < l.rows(); ++i) out[j] += mp::cpp_int(l(i, j)) * h[i];
  }
  return out;
}

}  // namespace

MarkovTrace markov_trace(const BratteliInclusion& b, double tol) {
  require_connected(b);
  const PFData pf = pf_data(dimension_matrix_of(b), tol);
  const Eigen::VectorXd h = b.large().dims().cast<double>();
  MarkovTrace out;
  out.s = pf.sqrt_mu / h.dot(pf.sqrt_mu);
  out.t = b.lambda().cast<double>().transpose() * out.s;
  return out;
}

ExpectationWeights trace_expectation_weights(const BratteliInclusion& b, double tol) {
  const MarkovTrace tau = markov_trace(b, tol);
  const auto& l = b.lambda();
  ExpectationWeights out{Eigen::MatrixXd::Zero(l.rows(), l.cols()),
                         Eigen::MatrixXd::Zero(l.rows(), l.cols())};
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      if (l(i, j) == 0) continue;
      out.lambda(i, j) = static_cast<double>(l(i, j)) * tau.s(i) / tau.t(j);
      out.block_index(i, j) = static_cast<double>(l(i, j) * l(i, j));
    }
  }
  return out;
}

bool is_extremal(const BratteliInclusion& b, double tol) {
  const auto trace_weights = trace_expectation_weights(b);
  const auto min_weights = minimal_expectation_weights(dimension_matrix_of(b));
  return (trace_weights.lambda - min_weights.lambda).cwiseAbs().maxCoeff() <= tol;
}

bool is_super_extremal(const BratteliInclusion& b) {
  require_connected(b);
  const auto v = gram_image(b);
  const auto& k = b.small().dims();
  // v ∝ k  ⇔  v_j k_0 = v_0 k_j for all j.
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] * k(0) != v[0] * k(static_cast<Eigen::Index>(j))) return false;
  }
  return true;
}

std::int64_t super_extremal_index(const BratteliInclusion& b) {
  if (!is_super_extremal(b)) {
    throw Error(Errc::not_super_extremal, "Lambda^t h is not proportional to k");
  }
  mp::cpp_int hh = 0, kk = 0;
  for (Eigen::Index i = 0; i < b.large().dims().size(); ++i) {
    hh += mp::cpp_int(b.large().dims()(i)) * b.large().dims()(i);
  }
  for (Eigen::Index j = 0; j < b.small().dims().size(); ++j) {
    kk += mp::cpp_int(b.small().dims()(j)) * b.small().dims()(j);
  }
  const mp::cpp_rational ratio(hh, kk);
  const mp::cpp_rational factor(gram_image(b)[0], mp::cpp_int(b.small().dims()(0)));
  if (ratio != factor || mp::denominator(ratio) != 1) {
    std::ostringstream os;
    os << "super-extremal index " << ratio << " is not an integer equal to " << factor;
    throw Error(Errc::integrality, os.str());
  }
  const mp::cpp_int value = mp::numerator(ratio);
  if (value > std::numeric_limits<std::int64_t>::max()) {
    throw Error(Errc::integrality, "super-extremal index overflows int64");
  }
  return value.convert_to<std::int64_t>();
}

ExtremalityReport extremality_report(const BratteliInclusion& b, double tol) {
  ExtremalityReport out;
  out.lambda_tau = trace_expectation_weights(b).lambda;
  out.lambda_min = minimal_expectation_weights(dimension_matrix_of(b)).lambda;
  out.extremal = (out.lambda_tau - out.lambda_min).cwiseAbs().maxCoeff() <= tol;
  out.super_extremal = out.extremal && is_super_extremal(b);
  if (out.super_extremal) out.index = super_extremal_index(b);
  return out;
}

BratteliInclusion compose(const BratteliInclusion& inner, const BratteliInclusion& outer) {
  if (inner.large().dims().size() != outer.small().dims().size() ||
      inner.large().dims() != outer.small().dims()) {
    throw Error(Errc::shape, "h of the inner inclusion must equal k of the outer one");
  }
  return validate_bratteli(inner.small().dims(), outer.large().dims(),
                           outer.lambda() * inner.lambda());
}

}  // namespace minidx
