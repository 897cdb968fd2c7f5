#include "minidx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "minidx/errors.hpp"

namespace minidx {

namespace {

constexpr int kPolishSteps = 64;

double componentwise_residual(const Eigen::VectorXd& image, const Eigen::VectorXd& v,
                              double rho) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double scale = rho * v(j);
    worst = std::max(worst, std::abs(image(j) - scale) / scale);
  }
  return worst;
}

}  // namespace

PFData pf_data(const DimensionMatrix& d, double tol, std::int64_t max_iterations) {
  if (!is_connected(d)) {
    throw Error(Errc::not_connected, "Perron-Frobenius data needs a connected dimension matrix");
  }
  if (!(tol > 0.0)) throw Error(Errc::invalid_value, "tolerance must be positive");

  const Eigen::MatrixXd& D = d.entries();
  const Eigen::Index n = D.cols();

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd w(D.rows());
  Eigen::VectorXd z(n);
  double previous = 0.0;
  double ratio = 0.0;

  for (std::int64_t it = 0; it <= max_iterations; ++it) {
    w.noalias() = D * v;
    z.noalias() = D.transpose() * w;
    const double rho = v.dot(z);
    const double residual = componentwise_residual(z, v, rho);
    if (residual <= tol) {
      // Polish: keep iterating while the residual still halves, so reported
      // vectors sit at rounding level rather than just under tol.
      double best = residual;
      for (int extra = 0; extra < kPolishSteps && best > 0.0; ++extra) {
        const Eigen::VectorXd v2 = z / z.norm();
        const Eigen::VectorXd w2 = D * v2;
        const Eigen::VectorXd z2 = D.transpose() * w2;
        const double r2 = componentwise_residual(z2, v2, v2.dot(z2));
        if (!(r2 < 0.5 * best)) break;
        best = r2;
        v = v2;
        w = w2;
        z = z2;
      }
      PFData out;
      out.d = w.norm();
      out.sqrt_nu = v;
      out.sqrt_mu = w / out.d;
      out.iterations = it;
      return out;
    }
    if (previous > 0.0) ratio = residual / previous;
    previous = residual;
    v = z / z.norm();
  }

  std::ostringstream os;
  os << "power iteration did not reach tol " << tol << " in " << max_iterations
     << " iterations (last residual " << previous << ", spectral gap estimate "
     << std::max(0.0, 1.0 - ratio) << ")";
  throw Error(Errc::convergence, os.str());
}

double scalar_dimension(const DimensionMatrix& d, double tol) {
  double best = 0.0;
  for (const auto& comp : connected_components(d)) {
    best = std::max(best, pf_data(restrict_to(d, comp), tol).d);
  }
  return best;
}

double jones_value(int k) { return 2.0 + 2.0 * std::cos(2.0 * std::numbers::pi / k); }

IndexClass classify_index_value(double x, double tol) {
  if (!std::isfinite(x)) return x > 0 ? IndexClass{AtLeastFour{}} : IndexClass{Inadmissible{}};
  if (x >= 4.0 - tol) return AtLeastFour{};
  // jones_value(k) increases strictly towards 4, so the scan stops past x + tol.
  for (int k = 3;; ++k) {
    const double v = jones_value(k);
    if (std::abs(x - v) <= tol) return JonesValue{k};
    if (v > x + tol) return Inadmissible{};
  }
}

}  // namespace minidx
