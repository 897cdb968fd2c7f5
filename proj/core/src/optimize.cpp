#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "minidx/errors.hpp"
#include "minidx/realize.hpp"
#include "random_normal.hpp"

namespace minidx {

namespace {

constexpr double kDensityFloor = 1e-8;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr int kMaxIterationsPerStage = 400;
constexpr double kMaxStep = 4.0;
constexpr double kBetaSchedule[] = {4.0,   16.0,  64.0,  256.0, 1e3,
                                    4e3,   1.6e4, 6.4e4, 2.6e5, 1e6};

}  // namespace

IndexObjective::IndexObjective(const ConcreteInclusion& c)
    : rows_(c.inclusion().rows()), cols_(c.inclusion().cols()) {
  const auto& l = c.inclusion().lambda();
  for (Eigen::Index j = 0; j < cols_; ++j) {
    Column col{j, {}, dim_};
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (l(i, j) != 0) col.rows.push_back(i);
    }
    dim_ += static_cast<Eigen::Index>(col.rows.size()) - 1;
    columns_.push_back(std::move(col));
  }
  for (const auto& blk : c.commutant_blocks()) {
    Cell cell{blk.i, blk.j, blk.multiplicity, -1};
    if (cell.mult > 1) {
      cell.offset = dim_;
      dim_ += cell.mult * cell.mult - 1;
    }
    cells_.push_back(cell);
  }
}

Eigen::MatrixXd IndexObjective::lambda(const Eigen::VectorXd& theta) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const auto& col : columns_) {
    const auto s = static_cast<Eigen::Index>(col.rows.size());
    Eigen::VectorXd logits(s);
    logits(0) = 0.0;
    for (Eigen::Index a = 1; a < s; ++a) logits(a) = theta(col.offset + a - 1);
    const Eigen::VectorXd w = (logits.array() - logits.maxCoeff()).exp();
    const double total = w.sum();
    for (Eigen::Index a = 0; a < s; ++a) out(col.rows[static_cast<std::size_t>(a)], col.j) = w(a) / total;
  }
  return out;
}

Eigen::MatrixXcd IndexObjective::cholesky_factor(const Cell& cell,
                                                 const Eigen::VectorXd& theta) const {
  const Eigen::Index n = cell.mult;
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(n, n);
  lower(0, 0) = 1.0;
  Eigen::Index pos = cell.offset;
  for (Eigen::Index p = 1; p < n; ++p) lower(p, p) = std::exp(theta(pos++));
  for (Eigen::Index p = 1; p < n; ++p) {
    for (Eigen::Index q = 0; q < p; ++q) {
      lower(p, q) = cplx(theta(pos), theta(pos + 1));
      pos += 2;
    }
  }
  return lower;
}

std::vector<Eigen::MatrixXcd> IndexObjective::densities(const Eigen::VectorXd& theta) const {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& cell : cells_) {
    if (cell.mult == 1) {
      out.push_back(Eigen::MatrixXcd::Ones(1, 1));
      continue;
    }
    const Eigen::MatrixXcd lower = cholesky_factor(cell, theta);
    Eigen::MatrixXcd a = lower * lower.adjoint();
    a = 0.5 * (a + a.adjoint()).eval();
    out.push_back(a / a.trace().real());
  }
  return out;
}

Eigen::VectorXd IndexObjective::central_index(const Eigen::VectorXd& theta) const {
  const Eigen::MatrixXd lam = lambda(theta);
  const auto rho = densities(theta);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(rows_);
  for (std::size_t n = 0; n < cells_.size(); ++n) {
    const auto& cell = cells_[n];
    const double t = rho[n].inverse().trace().real();
    c(cell.i) += t / lam(cell.i, cell.j);
  }
  return c;
}

double IndexObjective::evaluate(const Eigen::VectorXd& theta, double beta,
                                Eigen::VectorXd* grad) const {
  const Eigen::MatrixXd lam = lambda(theta);

  // Per cell: T = Tr(ρ⁻¹) = t·Tr(A⁻¹) with A = LL*, t = Tr A, and
  // W = Tr(A⁻¹)·L* − t·L*A⁻² so that dT = 2 Re Tr(dL · W).
  std::vector<double> tr_inv(cells_.size(), 1.0);
  std::vector<Eigen::MatrixXcd> lowers(cells_.size()), ws(cells_.size());
  for (std::size_t n = 0; n < cells_.size(); ++n) {
    const auto& cell = cells_[n];
    if (cell.mult == 1) continue;
    lowers[n] = cholesky_factor(cell, theta);
    Eigen::MatrixXcd a = lowers[n] * lowers[n].adjoint();
    a = 0.5 * (a + a.adjoint()).eval();
    const double t = a.trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (!(es.eigenvalues().minCoeff() / t >= kDensityFloor)) return kInf;
    const Eigen::VectorXd inv_ev = es.eigenvalues().cwiseInverse();
    const Eigen::MatrixXcd a_inv = es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().adjoint();
    const double ta = inv_ev.sum();
    tr_inv[n] = t * ta;
    if (grad) ws[n] = ta * lowers[n].adjoint() - t * lowers[n].adjoint() * a_inv * a_inv;
  }

  Eigen::VectorXd c = Eigen::VectorXd::Zero(rows_);
  for (std::size_t n = 0; n < cells_.size(); ++n) {
    c(cells_[n].i) += tr_inv[n] / lam(cells_[n].i, cells_[n].j);
  }
  if (!c.allFinite()) return kInf;

  const Eigen::ArrayXd z = beta * c.array().log();
  const double zmax = z.maxCoeff();
  const Eigen::ArrayXd ez = (z - zmax).exp();
  const double value = (zmax + std::log(ez.sum())) / beta;
  if (!grad) return value;

  grad->setZero(dim_);
  const Eigen::ArrayXd dc = (ez / ez.sum()) / c.array();  // ∂F/∂c_i

  Eigen::MatrixXd g_lambda = Eigen::MatrixXd::Zero(rows_, cols_);
  for (std::size_t n = 0; n < cells_.size(); ++n) {
    const auto& cell = cells_[n];
    const double l = lam(cell.i, cell.j);
    g_lambda(cell.i, cell.j) = -dc(cell.i) * tr_inv[n] / (l * l);
  }
  for (const auto& col : columns_) {
    double mean = 0.0;
    for (const auto i : col.rows) mean += g_lambda(i, col.j) * lam(i, col.j);
    for (std::size_t a = 1; a < col.rows.size(); ++a) {
      const Eigen::Index i = col.rows[a];
      (*grad)(col.offset + static_cast<Eigen::Index>(a) - 1) = lam(i, col.j) * (g_lambda(i, col.j) - mean);
    }
  }

  for (std::size_t n = 0; n < cells_.size(); ++n) {
    const auto& cell = cells_[n];
    if (cell.mult == 1) continue;
    const double scale = dc(cell.i) / lam(cell.i, cell.j);
    const auto& w = ws[n];
    Eigen::Index pos = cell.offset;
    for (Eigen::Index p = 1; p < cell.mult; ++p) {
      (*grad)(pos++) = scale * 2.0 * (w(p, p) * lowers[n](p, p)).real();
    }
    for (Eigen::Index p = 1; p < cell.mult; ++p) {
      for (Eigen::Index q = 0; q < p; ++q) {
        (*grad)(pos++) = scale * 2.0 * w(q, p).real();
        (*grad)(pos++) = -scale * 2.0 * w(q, p).imag();
      }
    }
  }
  return value;
}

namespace {

// BFGS with Armijo backtracking; returns the last accepted point.
Eigen::VectorXd bfgs(const IndexObjective& f, Eigen::VectorXd x, double beta) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n), g_new(n);
  double fx = f.evaluate(x, beta, &g);
  if (!std::isfinite(fx)) return x;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  int stalls = 0;
  for (int iter = 0; iter < kMaxIterationsPerStage; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-13) break;
    Eigen::VectorXd p = -h * g;
    if (g.dot(p) >= 0.0) {
      h.setIdentity();
      p = -g;
    }
    const double len = p.lpNorm<Eigen::Infinity>();
    if (len > kMaxStep) p *= kMaxStep / len;
    const double slope = g.dot(p);

    double alpha = 1.0;
    double f_new = kInf;
    Eigen::VectorXd x_new;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      x_new = x + alpha * p;
      f_new = f.evaluate(x_new, beta, &g_new);
      if (std::isfinite(f_new) && f_new <= fx + kArmijo * alpha * slope) break;
      f_new = kInf;
    }
    if (!std::isfinite(f_new)) {
      if (h.isIdentity()) break;
      h.setIdentity();
      continue;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double r = 1.0 / sy;
      const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - r * s * y.transpose();
      h = v * h * v.transpose() + r * s * s.transpose();
    }
    stalls = (fx - f_new <= 1e-15 * (1.0 + std::abs(fx))) ? stalls + 1 : 0;
    x = x_new;
    fx = f_new;
    g = g_new;
    if (stalls >= 3) break;
  }
  return x;
}

struct Candidate {
  Eigen::VectorXd theta;
  Eigen::MatrixXd lambda;
  double value = kInf;
};

Candidate run_restart(const IndexObjective& f, Eigen::VectorXd theta) {
  for (const double beta : kBetaSchedule) theta = bfgs(f, theta, beta);
  Candidate out{theta, f.lambda(theta), kInf};
  if (std::isfinite(f.evaluate(theta, 1.0, nullptr))) out.value = f.central_index(theta).maxCoeff();
  return out;
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return std::lexicographical_compare(a.lambda.data(), a.lambda.data() + a.lambda.size(),
                                      b.lambda.data(), b.lambda.data() + b.lambda.size());
}

}  // namespace

NumericalMinimum minimize_index_numerically(const ConcreteInclusion& c, int restarts,
                                            std::uint64_t seed) {
  if (!is_connected(c.inclusion())) {
    throw Error(Errc::not_connected, "inclusion is not connected");
  }
  if (restarts < 1) throw Error(Errc::invalid_value, "restarts must be at least 1");
  const IndexObjective f(c);

  // Starting points are drawn up front so results do not depend on scheduling.
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(f.dimension()));
  for (int r = 1; r < restarts; ++r) {
    Eigen::VectorXd x(f.dimension());
    for (Eigen::Index p = 0; p < x.size(); ++p) x(p) = detail::standard_normal(rng);
    starts.push_back(std::move(x));
  }

  std::vector<std::future<Candidate>> jobs;
  const auto workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<Candidate> results;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    if (workers == 1) {
      results.push_back(run_restart(f, starts[r]));
    } else {
      jobs.push_back(std::async(std::launch::async, run_restart, std::cref(f), starts[r]));
    }
  }
  for (auto& job : jobs) results.push_back(job.get());

  const Candidate* best = nullptr;
  for (const auto& cand : results) {
    if (std::isfinite(cand.value) && (!best || better(cand, *best))) best = &cand;
  }
  if (!best) throw Error(Errc::convergence, "no restart reached a finite index");

  NumericalMinimum out;
  out.lambda = best->lambda;
  out.densities = f.densities(best->theta);
  out.value = quasi_basis_index(build_expectation(c, out.lambda, out.densities)).norm();
  return out;
}

}  // namespace minidx
