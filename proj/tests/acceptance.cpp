// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "inclusion_file.hpp"
#include "minidx/minindex.hpp"
#include "minidx/multimatrix.hpp"
#include "minidx/realize.hpp"
#include "minidx/spectral.hpp"
#include "support.hpp"

using namespace minidx;
using json = nlohmann::json;
using minidx::test::from_lambda;
using minidx::test::imat;
using minidx::test::ivec;

namespace {

constexpr double kExactTol = 1e-9;
constexpr double kSuperTol = 1e-6;
constexpr double kOracleTol = 1e-3;
constexpr std::uint64_t kSeed = 20240611;
constexpr int kRestarts = 16;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

int failures = 0;

void report(int n, const char* title, Outcome& o) {
  std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", n, title, o.note.str().c_str());
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

std::vector<double> produced_indices;
// Random real matrices of item 2 are not dimension matrices of any inclusion,
// so quantization says nothing about them; they are counted, not classified.
std::size_t unrealized = 0;

double record(double x) {
  produced_indices.push_back(x);
  return x;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string data(const std::string& name) { return std::string(MINIDX_TEST_DATA) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double max_abs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

void criterion_1() {
  Outcome o;
  const auto c2m2 = from_lambda(ivec({1, 1}), imat({{1, 1}}));
  const double a = record(minimal_index(dimension_matrix_of(c2m2)));
  o.require(std::abs(a - 2.0) <= kExactTol, "C^2 in M_2 index");
  o.require(jones_k(classify_index_value(a, kExactTol)) == 4, "C^2 in M_2 class");

  const auto cm2m3 = from_lambda(ivec({1, 2}), imat({{1, 1}}));
  const double b = record(minimal_index(dimension_matrix_of(cm2m3)));
  o.require(std::abs(b - 2.0) <= kExactTol, "C+M_2 in M_3 index");
  o.require(!is_super_extremal(cm2m3), "C+M_2 in M_3 super-extremal");

  const DimensionMatrix golden(minidx::test::dmat({{1, 1}, {0, 1}}));
  const double c = record(minimal_index(golden));
  o.require(std::abs(c - (3.0 + std::sqrt(5.0)) / 2.0) <= kExactTol, "golden index");
  o.require(jones_k(classify_index_value(c, kExactTol)) == 5, "golden class");

  char buf[160];
  std::snprintf(buf, sizeof buf, "indices %.12g, %.12g, %.12g", a, b, c);
  o.note << buf;
  report(1, "minimal index closed form", o);
}

void criterion_2() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  const int count = 500;
  double worst = 0.0;
  for (int t = 0; t < count; ++t) {
    const DimensionMatrix d(minidx::test::random_dimension_matrix(rng, 5, true));
    const auto pf = pf_data(d);
    const auto e = minimal_expectation_weights(d, pf);
    const auto& D = d.entries();
    const Eigen::VectorXd mu = pf.sqrt_mu.array().square();
    const Eigen::VectorXd nu = pf.sqrt_nu.array().square();

    const double stochastic = (e.lambda.colwise().sum().array() - 1.0).abs().maxCoeff();
    const double additivity = std::abs(pf.sqrt_mu.dot(D * pf.sqrt_nu) - pf.d);
    const auto ind = index_of_expectation(d, e);
    const double central = (ind.values.array() - pf.d * pf.d).abs().maxCoeff();
    ++unrealized;
    const Eigen::MatrixXd w =
        (D.array() * (pf.sqrt_mu * pf.sqrt_nu.transpose()).array()).matrix() / pf.d;
    const double marginals = std::max((w.rowwise().sum() - mu).cwiseAbs().maxCoeff(),
                                      (w.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff());
    const double dev = std::max({stochastic, additivity, central, marginals});
    worst = std::max(worst, dev);
    o.require(stochastic <= kExactTol, "column-stochastic");
    o.require(additivity <= kExactTol, "weighted additivity");
    o.require(central <= kExactTol, "scalar central index");
    o.require(marginals <= kExactTol, "spherical marginals");
  }
  o.note << count << " random matrices, max deviation " << worst;
  report(2, "minimal expectation identities", o);
}

std::vector<BratteliInclusion> exhaustive_family() {
  return enumerate_connected(EnumerationBounds{3, 3, 8});
}

void criterion_3(const std::vector<BratteliInclusion>& family) {
  Outcome o;
  double worst = 0.0;
  for (const auto& b : family) {
    const auto d = dimension_matrix_of(b);
    const auto pf = pf_data(d);
    const auto tau = trace_expectation_weights(b);
    const auto lambda0 = minimal_expectation_weights(d, pf);
    const double lam_dev = max_abs(tau.lambda, lambda0.lambda);
    const auto ind = index_of_expectation(d, tau);
    const double ind_dev = (ind.values.array() - pf.d * pf.d).abs().maxCoeff();
    record(ind.norm());
    worst = std::max({worst, lam_dev, ind_dev});
    o.require(lam_dev <= kExactTol, "trace weights equal minimal weights");
    o.require(ind_dev <= kExactTol, "trace expectation index is d^2");
  }
  o.note << family.size() << " inclusions, max deviation " << worst;
  report(3, "trace expectation is minimal", o);
}

void criterion_4(const std::vector<BratteliInclusion>& family) {
  Outcome o;
  std::size_t super = 0;
  for (const auto& b : family) {
    const auto tr = markov_trace(b);
    const auto nu = canonical_states(dimension_matrix_of(b)).left;
    const Eigen::VectorXd kt = b.small().dims().cast<double>().cwiseProduct(tr.t);
    const bool float_test = (kt - nu).cwiseAbs().maxCoeff() <= kExactTol;
    const bool exact = is_super_extremal(b);
    o.require(float_test == exact, "exact and float predicates agree");
    if (exact) {
      ++super;
      const auto idx = super_extremal_index(b);
      const double mi = minimal_index(dimension_matrix_of(b));
      o.require(idx >= 1, "positive integer index");
      o.require(std::abs(static_cast<double>(idx) - mi) <= kSuperTol, "index equals minimal index");
    }
  }
  o.note << super << " of " << family.size() << " super-extremal; ";

  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 1; n <= 12; ++n) {
    const auto r = run({"enumerate", "--index", std::to_string(n), "--max-summands", "4",
                        "--max-entry", "3", "--max-dim", "12", "--json"});
    o.require(r.code == 0, "enumerate exit code for N=" + std::to_string(n));
    if (r.code != 0) continue;
    const auto list = json::parse(r.out);
    o.require(!list.empty(), "no inclusion of index " + std::to_string(n));
    for (const auto& entry : list) {
      const auto inc = std::get<BratteliInclusion>(cli::parse_inclusion(entry));
      o.require(super_extremal_index(inc) == n, "enumerated index differs from N");
      record(minimal_index(dimension_matrix_of(inc)));
    }
    // The diagonal witness C^N in M_N, outside the summand bound above.
    const auto diag = from_lambda(IntVector::Ones(n), IntMatrix::Ones(1, n));
    o.require(super_extremal_index(diag) == n, "C^N in M_N index");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "index 1..12 enumerated in %.1f s", seconds_since(t0));
  o.note << buf;
  report(4, "super-extremality", o);
}

void criterion_5(const std::vector<BratteliInclusion>& family) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t count = 0;
  double qb_worst = 0.0, value_worst = 0.0, lambda_worst = 0.0;
  for (const auto& b : family) {
    if (b.large().dims().squaredNorm() > 36) continue;
    ++count;
    const auto d = dimension_matrix_of(b);
    const double target = record(minimal_index(d));
    const auto c = realize_inclusion(b);

    const auto e0 = minimal_expectation(c);
    const auto formula = index_of_expectation(d, minimal_expectation_weights(d));
    const auto qb = quasi_basis_index(e0);
    const double qb_dev = (qb.values - formula.values).cwiseAbs().maxCoeff();
    qb_worst = std::max(qb_worst, qb_dev);
    o.require(qb_dev <= kSuperTol, "quasi-basis index matches formula");

    const auto best = minimize_index_numerically(c, kRestarts, kSeed);
    const double vd = std::abs(best.value - target);
    const double ld = max_abs(best.lambda, minimal_expectation_weights(d).lambda);
    value_worst = std::max(value_worst, vd);
    lambda_worst = std::max(lambda_worst, ld);
    o.require(vd <= kOracleTol, "numerical minimum matches closed form");
    o.require(ld <= kOracleTol, "numerical minimizer matches minimal weights");
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed <= 300.0, "runtime over 5 minutes");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu inclusions, quasi-basis dev %.2e, value dev %.2e, lambda dev %.2e, %.1f s",
                count, qb_worst, value_worst, lambda_worst, elapsed);
  o.note << buf;
  report(5, "numerical oracle", o);
}

void criterion_6() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 6);
  std::uniform_int_distribution<int> size(1, 5);
  std::uniform_real_distribution<double> entry(1.0, 4.0);
  std::bernoulli_distribution zero(0.35);
  auto sample = [&](int m, int n) {
    for (;;) {
      Eigen::MatrixXd d(m, n);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) d(i, j) = zero(rng) ? 0.0 : entry(rng);
      }
      if ((d.rowwise().sum().array() > 0.0).all() && (d.colwise().sum().array() > 0.0).all() &&
          minidx::test::union_find_connected(d))
        return d;
    }
  };
  double worst_slack = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const int n = size(rng), mid = size(rng), m = size(rng);
    const Eigen::MatrixXd d1 = sample(mid, n), d2 = sample(m, mid);
    const auto composite = compose(DimensionMatrix(d1), DimensionMatrix(d2));
    const Eigen::MatrixXd product = d2 * d1;
    o.require(composite.entries() == product, "compose is D2 D1");
    const double d = scalar_dimension(composite);
    const double bound = scalar_dimension(DimensionMatrix(d1)) * scalar_dimension(DimensionMatrix(d2));
    o.require(d <= bound + kExactTol, "submultiplicativity");
    worst_slack = std::min(worst_slack, bound - d);
  }

  const auto inner = from_lambda(ivec({1}), imat({{1}, {1}}));
  const auto outer = from_lambda(ivec({1, 1}), imat({{1, 1}}));
  const auto comp = compose(inner, outer);
  o.require(comp.lambda().size() == 1 && comp.lambda()(0, 0) == 2, "composite Lambda is [2]");
  const double ci = minimal_index(dimension_matrix_of(comp));
  const double product = minimal_index(dimension_matrix_of(inner)) *
                         minimal_index(dimension_matrix_of(outer));
  o.require(std::abs(ci - 4.0) <= kExactTol && std::abs(ci - product) <= kExactTol,
            "composite index 4");
  o.require(super_extremal_index(comp) == 4, "composite super-extremal index");
  o.note << "100 pairs, min slack " << worst_slack << ", composite index " << ci;
  report(6, "composition", o);
}

void criterion_7() {
  Outcome o;
  std::size_t jones = 0, large = 0;
  for (const double x : produced_indices) {
    const auto cls = classify_index_value(x, kExactTol);
    if (std::holds_alternative<JonesValue>(cls)) ++jones;
    if (std::holds_alternative<AtLeastFour>(cls)) ++large;
    if (std::holds_alternative<Inadmissible>(cls)) {
      o.require(false, "inadmissible value " + std::to_string(x));
    }
  }
  o.note << produced_indices.size() << " values: " << jones << " Jones, " << large
         << " at least 4; " << unrealized << " random real matrices not classified";
  report(7, "index quantization", o);
}

void criterion_8() {
  Outcome o;
  for (const auto* name : {"c2_in_m2", "c_m2_in_m3", "golden_ratio"}) {
    const auto golden = read_file(std::string(MINIDX_TEST_GOLDEN) + "/" + name + ".analyze.json");
    for (int rep = 0; rep < 3; ++rep) {
      const auto r = run({"analyze", data(std::string(name) + ".json"), "--json"});
      o.require(r.code == 0 && r.out == golden, std::string("golden mismatch for ") + name);
    }
  }
  const struct {
    std::vector<std::string> args;
    int code;
  } cases[] = {{{"validate", data("malformed.json")}, 1},
               {{"analyze", data("malformed.json")}, 1},
               {{"validate", data("inconsistent.json")}, 1},
               {{"analyze", data("inconsistent.json")}, 1},
               {{"verify", data("oversized.json")}, 3},
               {{"validate", data("c2_in_m2.json")}, 0}};
  for (const auto& c : cases) {
    const auto r = run(c.args);
    o.require(r.code == c.code, c.args[0] + " " + c.args[1] + " exit " + std::to_string(r.code));
    if (c.code != 0) {
      bool has_error = false;
      try {
        has_error = json::parse(r.err).contains("error");
      } catch (const json::exception&) {
      }
      o.require(has_error, "error object on stderr");
    }
  }
  o.note << "3 golden files x 3 runs, 6 exit-code cases";
  report(8, "CLI golden files and exit codes", o);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto family = exhaustive_family();
  criterion_1();
  criterion_2();
  criterion_3(family);
  criterion_4(family);
  criterion_5(family);
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d of 8 criteria failed, %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
