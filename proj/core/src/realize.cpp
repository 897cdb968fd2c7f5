#include "minidx/realize.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "minidx/errors.hpp"
#include "minidx/minindex.hpp"
#include "random_normal.hpp"

namespace minidx {

namespace {

constexpr double kEmbeddingTol = 1e-12;
constexpr double kLawTol = 1e-10;
constexpr double kMarkovTol = 1e-10;
constexpr double kDensityTol = 1e-12;
constexpr double kQuasiBasisTol = 1e-8;
constexpr double kCommutantTol = 1e-10;
constexpr int kPositivitySamples = 8;

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

void require(bool ok, Errc code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

// Nullity of x ↦ ([G_1, x], ..., [G_g, x]) on M_h, vec taken column-major.
std::int64_t commutant_nullity(const std::vector<Eigen::MatrixXcd>& gens, Eigen::Index h) {
  const Eigen::Index h2 = h * h;
  if (gens.empty()) return h2;
  Eigen::MatrixXcd system(h2 * static_cast<Eigen::Index>(gens.size()), h2);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(h, h);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    // vec(Gx − xG) = (I ⊗ G − Gᵀ ⊗ I) vec(x)
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(h2, h2);
    for (Eigen::Index a = 0; a < h; ++a) {
      for (Eigen::Index b = 0; b < h; ++b) {
        op.block(a * h, b * h, h, h) += id(a, b) * gens[g];
        op.block(a * h, b * h, h, h) -= gens[g](b, a) * id;
      }
    }
    system.middleRows(static_cast<Eigen::Index>(g) * h2, h2) = op;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
  lu.setThreshold(1e-10);
  return h2 - lu.rank();
}

}  // namespace

BlockDiag BlockDiag::zero(const IntVector& dims) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (Eigen::Index i = 0; i < dims.size(); ++i) {
    blocks.push_back(Eigen::MatrixXcd::Zero(dims(i), dims(i)));
  }
  return BlockDiag(std::move(blocks));
}

BlockDiag BlockDiag::identity(const IntVector& dims) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (Eigen::Index i = 0; i < dims.size(); ++i) {
    blocks.push_back(Eigen::MatrixXcd::Identity(dims(i), dims(i)));
  }
  return BlockDiag(std::move(blocks));
}

BlockDiag BlockDiag::unit(const IntVector& dims, std::size_t summand, Eigen::Index r,
                          Eigen::Index s) {
  BlockDiag out = zero(dims);
  out.block(summand)(r, s) = 1.0;
  return out;
}

BlockDiag BlockDiag::adjoint() const {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return BlockDiag(std::move(blocks));
}

cplx BlockDiag::trace() const {
  cplx t = 0.0;
  for (const auto& b : blocks_) t += b.trace();
  return t;
}

double BlockDiag::max_abs() const {
  double out = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() > 0) out = std::max(out, b.cwiseAbs().maxCoeff());
  }
  return out;
}

BlockDiag& BlockDiag::operator+=(const BlockDiag& o) {
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
  return *this;
}

BlockDiag& BlockDiag::operator-=(const BlockDiag& o) {
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
  return *this;
}

BlockDiag& BlockDiag::operator*=(cplx s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

BlockDiag operator*(const BlockDiag& a, const BlockDiag& b) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) blocks.push_back(a.blocks_[i] * b.blocks_[i]);
  return BlockDiag(std::move(blocks));
}

std::vector<BlockDiag> matrix_unit_basis(const IntVector& dims) {
  std::vector<BlockDiag> out;
  for (Eigen::Index i = 0; i < dims.size(); ++i) {
    for (Eigen::Index r = 0; r < dims(i); ++r) {
      for (Eigen::Index s = 0; s < dims(i); ++s) out.push_back(BlockDiag::unit(dims, idx(i), r, s));
    }
  }
  return out;
}

std::vector<BlockDiag> algebra_generators(const IntVector& dims) {
  std::vector<BlockDiag> out;
  for (Eigen::Index i = 0; i < dims.size(); ++i) {
    for (Eigen::Index a = 0; a < dims(i); ++a) {
      out.push_back(BlockDiag::unit(dims, idx(i), 0, a));
      if (a > 0) out.push_back(BlockDiag::unit(dims, idx(i), a, 0));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ConcreteInclusion

ConcreteInclusion::ConcreteInclusion(BratteliInclusion b)
    : b_(std::move(b)),
      offsets_(IntMatrix::Zero(b_.rows(), b_.cols())),
      cell_ids_(IntMatrix::Constant(b_.rows(), b_.cols(), -1)),
      blocks_(relative_commutant_shape(b_)) {
  const auto& l = b_.lambda();
  const auto& k = b_.small().dims();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    Eigen::Index offset = 0;
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      offsets_(i, j) = offset;
      offset += k(j) * l(i, j);
    }
  }
  for (std::size_t c = 0; c < blocks_.size(); ++c) {
    cell_ids_(blocks_[c].i, blocks_[c].j) = static_cast<Eigen::Index>(c);
  }
}

BlockDiag ConcreteInclusion::embed(const BlockDiag& y) const {
  const auto& l = b_.lambda();
  const auto& k = b_.small().dims();
  BlockDiag out = BlockDiag::zero(large_dims());
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      const Eigen::Index mult = l(i, j);
      if (mult == 0) continue;
      const Eigen::Index off = offsets_(i, j);
      const auto& yj = y.block(idx(j));
      for (Eigen::Index a = 0; a < k(j); ++a) {
        for (Eigen::Index c = 0; c < k(j); ++c) {
          for (Eigen::Index r = 0; r < mult; ++r) {
            out.block(idx(i))(off + a * mult + r, off + c * mult + r) = yj(a, c);
          }
        }
      }
    }
  }
  return out;
}

BlockDiag ConcreteInclusion::central_projection_large(std::size_t i) const {
  BlockDiag out = BlockDiag::zero(large_dims());
  out.block(i).setIdentity();
  return out;
}

BlockDiag ConcreteInclusion::central_projection_small(std::size_t j) const {
  BlockDiag q = BlockDiag::zero(small_dims());
  q.block(j).setIdentity();
  return embed(q);
}

BlockDiag ConcreteInclusion::cell_projection(Eigen::Index i, Eigen::Index j) const {
  BlockDiag out = BlockDiag::zero(large_dims());
  const Eigen::Index size = small_dims()(j) * b_.lambda()(i, j);
  out.block(idx(i)).block(offsets_(i, j), offsets_(i, j), size, size).setIdentity();
  return out;
}

BlockDiag ConcreteInclusion::commutant_unit(const CommutantBlock& cell, Eigen::Index b,
                                            Eigen::Index c) const {
  BlockDiag out = BlockDiag::zero(large_dims());
  const Eigen::Index mult = cell.multiplicity;
  const Eigen::Index off = offsets_(cell.i, cell.j);
  for (Eigen::Index a = 0; a < small_dims()(cell.j); ++a) {
    out.block(idx(cell.i))(off + a * mult + b, off + a * mult + c) = 1.0;
  }
  return out;
}

double ConcreteInclusion::commutator_defect(const BlockDiag& x) const {
  double worst = 0.0;
  for (const auto& g : algebra_generators(small_dims())) {
    const BlockDiag ig = embed(g);
    worst = std::max(worst, (ig * x - x * ig).max_abs());
  }
  return worst;
}

ConcreteInclusion realize_inclusion(const BratteliInclusion& b) {
  ConcreteInclusion c(b);
  const auto& k = c.small_dims();
  const auto& h = c.large_dims();

  require((c.embed(BlockDiag::identity(k)) - BlockDiag::identity(h)).max_abs() <= kEmbeddingTol,
          Errc::law_violation, "embedding is not unital");
  const auto gens = algebra_generators(k);
  const auto basis = matrix_unit_basis(k);
  for (const auto& x : basis) {
    require((c.embed(x.adjoint()) - c.embed(x).adjoint()).max_abs() <= kEmbeddingTol,
            Errc::law_violation, "embedding does not preserve adjoints");
    for (const auto& g : gens) {
      require((c.embed(g * x) - c.embed(g) * c.embed(x)).max_abs() <= kEmbeddingTol,
              Errc::law_violation, "embedding is not multiplicative");
    }
  }

  std::vector<BlockDiag> images;
  for (const auto& g : gens) images.push_back(c.embed(g));
  std::int64_t dim = 0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    std::vector<Eigen::MatrixXcd> blocks;
    for (const auto& g : images) blocks.push_back(g.block(idx(i)));
    dim += commutant_nullity(blocks, h(i));
  }
  c.commutant_dimension_ = dim;
  if (dim != relative_commutant_dimension(b)) {
    std::ostringstream os;
    os << "relative commutant has dimension " << dim << ", expected "
       << relative_commutant_dimension(b);
    throw Error(Errc::law_violation, os.str());
  }
  return c;
}

// ---------------------------------------------------------------------------
// ConcreteExpectation

BlockDiag ConcreteExpectation::apply_small(const BlockDiag& x) const {
  const auto& l = c_.inclusion().lambda();
  const auto& k = c_.small_dims();
  BlockDiag out = BlockDiag::zero(k);
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      const Eigen::Index mult = l(i, j);
      if (mult == 0) continue;
      const auto& rho = densities_[idx(c_.cell_index(i, j))];
      const Eigen::Index off = c_.cell_offset(i, j);
      const auto& xi = x.block(idx(i));
      Eigen::MatrixXcd& yj = out.block(idx(j));
      // (id ⊗ φ_ρ)(X)_{ac} = Σ_{rs} X_{(a,r),(c,s)} ρ_{sr}
      for (Eigen::Index a = 0; a < k(j); ++a) {
        for (Eigen::Index c = 0; c < k(j); ++c) {
          cplx acc = 0.0;
          for (Eigen::Index r = 0; r < mult; ++r) {
            for (Eigen::Index s = 0; s < mult; ++s) {
              acc += xi(off + a * mult + r, off + c * mult + s) * rho(s, r);
            }
          }
          yj(a, c) += lambda_(i, j) * acc;
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXcd ConcreteExpectation::matrix() const {
  const auto basis = matrix_unit_basis(c_.large_dims());
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const BlockDiag image = apply(basis[idx(col)]);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < image.summands(); ++i) {
      const auto& blk = image.block(i);
      for (Eigen::Index r = 0; r < blk.rows(); ++r) {
        for (Eigen::Index s = 0; s < blk.cols(); ++s) out(row++, col) = blk(r, s);
      }
    }
  }
  return out;
}

namespace {

void check_markovian(const ConcreteInclusion& c, const Eigen::MatrixXd& lambda) {
  const auto& l = c.inclusion().lambda();
  require(lambda.rows() == l.rows() && lambda.cols() == l.cols(), Errc::not_markovian,
          "lambda has the wrong shape");
  for (Eigen::Index j = 0; j < l.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      const double v = lambda(i, j);
      if (l(i, j) == 0) {
        require(v == 0.0, Errc::not_markovian, "lambda is nonzero off the support of Lambda");
      } else {
        require(std::isfinite(v) && v > 0.0, Errc::not_markovian,
                "lambda must be strictly positive on the support of Lambda");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kMarkovTol) {
      std::ostringstream os;
      os << "column " << j << " of lambda sums to " << sum;
      throw Error(Errc::not_markovian, os.str());
    }
  }
}

void check_density(const Eigen::MatrixXcd& rho, std::int64_t mult) {
  require(rho.rows() == mult && rho.cols() == mult, Errc::bad_density,
          "density has the wrong size");
  require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= kDensityTol, Errc::bad_density,
          "density is not Hermitian");
  require(std::abs(rho.trace() - cplx(1.0)) <= kDensityTol, Errc::bad_density,
          "density does not have trace 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() > 0.0, Errc::bad_density,
          "density is not positive definite");
}

void check_expectation_laws(const ConcreteExpectation& e) {
  const auto& c = e.inclusion();
  const auto& h = c.large_dims();
  const auto violated = [](double defect, const char* law) {
    if (defect > kLawTol) {
      std::ostringstream os;
      os << "expectation violates " << law << " (defect " << defect << ")";
      throw Error(Errc::law_violation, os.str());
    }
  };

  violated((e.apply(BlockDiag::identity(h)) - BlockDiag::identity(h)).max_abs(), "E(1) = 1");

  const auto basis = matrix_unit_basis(h);
  std::vector<BlockDiag> gens;
  for (const auto& g : algebra_generators(c.small_dims())) gens.push_back(c.embed(g));
  for (const auto& x : basis) {
    const BlockDiag ex = e.apply(x);
    violated((e.apply(ex) - ex).max_abs(), "E^2 = E");
    for (const auto& g : gens) {
      violated((e.apply(g * x) - g * ex).max_abs(), "left N-modularity");
      violated((e.apply(x * g) - ex * g).max_abs(), "right N-modularity");
    }
  }

  std::mt19937_64 rng(0x5eed);
  for (int sample = 0; sample < kPositivitySamples; ++sample) {
    BlockDiag x = BlockDiag::zero(h);
    for (std::size_t i = 0; i < x.summands(); ++i) {
      auto& blk = x.block(i);
      for (Eigen::Index r = 0; r < blk.rows(); ++r) {
        for (Eigen::Index s = 0; s < blk.cols(); ++s) {
          blk(r, s) = cplx(detail::standard_normal(rng), detail::standard_normal(rng));
        }
      }
    }
    const BlockDiag y = e.apply_small(x.adjoint() * x);
    for (std::size_t j = 0; j < y.summands(); ++j) {
      const Eigen::MatrixXcd herm = 0.5 * (y.block(j) + y.block(j).adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
      violated(std::max(0.0, -es.eigenvalues().minCoeff()), "positivity");
    }
  }
}

}  // namespace

ConcreteExpectation build_expectation(const ConcreteInclusion& c, const Eigen::MatrixXd& lambda,
                                      std::vector<Eigen::MatrixXcd> densities) {
  check_markovian(c, lambda);
  require(densities.size() == c.commutant_blocks().size(), Errc::bad_density,
          "need one density per nonzero cell");
  for (std::size_t cell = 0; cell < densities.size(); ++cell) {
    check_density(densities[cell], c.commutant_blocks()[cell].multiplicity);
  }
  ConcreteExpectation e(c, lambda, std::move(densities));
  check_expectation_laws(e);
  return e;
}

std::vector<Eigen::MatrixXcd> uniform_densities(const ConcreteInclusion& c) {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& cell : c.commutant_blocks()) {
    const auto mult = static_cast<Eigen::Index>(cell.multiplicity);
    out.push_back(Eigen::MatrixXcd::Identity(mult, mult) / static_cast<double>(mult));
  }
  return out;
}

ConcreteExpectation minimal_expectation(const ConcreteInclusion& c) {
  const auto weights = minimal_expectation_weights(dimension_matrix_of(c.inclusion()));
  return build_expectation(c, weights.lambda, uniform_densities(c));
}

CentralIndex quasi_basis_index(const ConcreteExpectation& e) {
  const auto& c = e.inclusion();
  const auto& h = c.large_dims();
  const auto& k = c.small_dims();

  // Quasi-basis elements grouped by the summand of M they live in.
  std::vector<std::vector<BlockDiag>> by_summand(idx(h.size()));
  for (std::size_t cell = 0; cell < c.commutant_blocks().size(); ++cell) {
    const auto& blk = c.commutant_blocks()[cell];
    const Eigen::Index mult = blk.multiplicity;
    const double weight = e.lambda()(blk.i, blk.j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e.densities()[cell]);
    const Eigen::Index off = c.cell_offset(blk.i, blk.j);
    (void)k;
    for (Eigen::Index b = 0; b < mult; ++b) {
      const double scale = 1.0 / std::sqrt(weight * es.eigenvalues()(b));
      const Eigen::VectorXcd f = es.eigenvectors().col(b);
      for (Eigen::Index r = 0; r < h(blk.i); ++r) {
        BlockDiag u = BlockDiag::zero(h);
        // |e_r⟩⟨e_0 ⊗ f_b|
        for (Eigen::Index s = 0; s < mult; ++s) {
          u.block(idx(blk.i))(r, off + s) = scale * std::conj(f(s));
        }
        by_summand[idx(blk.i)].push_back(std::move(u));
      }
    }
  }

  for (Eigen::Index i = 0; i < h.size(); ++i) {
    for (Eigen::Index r = 0; r < h(i); ++r) {
      for (Eigen::Index s = 0; s < h(i); ++s) {
        const BlockDiag x = BlockDiag::unit(h, idx(i), r, s);
        BlockDiag rebuilt = BlockDiag::zero(h);
        for (const auto& u : by_summand[idx(i)]) rebuilt += u * e.apply(u.adjoint() * x);
        const double defect = (rebuilt - x).max_abs();
        if (defect > kQuasiBasisTol) {
          std::ostringstream os;
          os << "quasi-basis identity fails on e_" << r << s << " of summand " << i
             << " (defect " << defect << ")";
          throw Error(Errc::quasi_basis, os.str());
        }
      }
    }
  }

  CentralIndex out{Eigen::VectorXd::Zero(h.size())};
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(h(i), h(i));
    for (const auto& u : by_summand[idx(i)]) sum += u.block(idx(i)) * u.block(idx(i)).adjoint();
    const double coeff = sum.trace().real() / static_cast<double>(h(i));
    const double defect =
        (sum - coeff * Eigen::MatrixXcd::Identity(h(i), h(i))).cwiseAbs().maxCoeff();
    if (defect > kQuasiBasisTol * std::max(1.0, coeff)) {
      std::ostringstream os;
      os << "sum of u u* is not central on summand " << i << " (defect " << defect << ")";
      throw Error(Errc::not_central, os.str());
    }
    out.values(i) = coeff;
  }
  return out;
}

double spherical_state_eval(const ConcreteInclusion& c, const BlockDiag& x) {
  const double defect = c.commutator_defect(x);
  if (defect > kCommutantTol * std::max(1.0, x.max_abs())) {
    std::ostringstream os;
    os << "element is not in the relative commutant (commutator " << defect << ")";
    throw Error(Errc::not_in_commutant, os.str());
  }
  const auto d = dimension_matrix_of(c.inclusion());
  const PFData pf = pf_data(d);
  const auto states = canonical_states(d, pf);
  const auto weights = minimal_expectation_weights(d, pf);
  const ConcreteExpectation e0 = build_expectation(c, weights.lambda, uniform_densities(c));
  const BlockDiag center = e0.apply_small(x);
  double value = 0.0;
  for (std::size_t j = 0; j < center.summands(); ++j) {
    const cplx z = center.block(j).trace() / static_cast<double>(center.block(j).rows());
    value += states.left(static_cast<Eigen::Index>(j)) * z.real();
  }
  return value;
}

}  // namespace minidx
