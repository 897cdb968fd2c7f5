#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "minidx/errors.hpp"
#include "minidx/minindex.hpp"
#include "minidx/multimatrix.hpp"
#include "support.hpp"

using namespace minidx;
using namespace minidx::test;

namespace {

using Key = std::pair<std::vector<std::int64_t>, std::vector<std::vector<std::int64_t>>>;

// Relabeling-invariant key by brute force over all column permutations.
Key brute_force_class(const IntVector& k, const IntMatrix& l) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(k.size()));
  std::iota(perm.begin(), perm.end(), 0);
  Key best;
  bool first = true;
  do {
    Key key;
    for (const auto c : perm) key.first.push_back(k(c));
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      std::vector<std::int64_t> row;
      for (const auto c : perm) row.push_back(l(i, c));
      key.second.push_back(row);
    }
    std::sort(key.second.begin(), key.second.end());
    if (first || key < best) best = key;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every connected (k, Λ) within bounds, one representative per class.
std::set<Key> brute_force_family(int max_summands, std::int64_t max_entry, std::int64_t max_dim) {
  std::set<Key> out;
  for (int n = 1; n <= max_summands; ++n) {
    for (int m = 1; m <= max_summands; ++m) {
      IntVector k = IntVector::Ones(n);
      for (;;) {
        IntMatrix l = IntMatrix::Zero(m, n);
        for (;;) {
          const IntVector h = l * k;
          const bool ok = (h.array() >= 1).all() && (h.array() <= max_dim).all() &&
                          (l.colwise().sum().array() > 0).all();
          if (ok && union_find_connected(l.cast<double>())) out.insert(brute_force_class(k, l));
          Eigen::Index p = 0;
          while (p < l.size() && l.data()[p] == max_entry) l.data()[p++] = 0;
          if (p == l.size()) break;
          ++l.data()[p];
        }
        Eigen::Index p = 0;
        while (p < n && k(p) == max_dim) k(p++) = 1;
        if (p == n) break;
        ++k(p);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("markov_trace examples") {
  const auto a = markov_trace(validate_bratteli(ivec({1}), ivec({3}), imat({{3}})));
  CHECK(a.s(0) == doctest::Approx(1.0 / 3.0));
  CHECK(a.t(0) == doctest::Approx(1.0));

  const auto b = markov_trace(validate_bratteli(ivec({1, 1}), ivec({2}), imat({{1, 1}})));
  CHECK(b.s(0) == doctest::Approx(0.5));
  CHECK(b.t(0) == doctest::Approx(0.5));
  CHECK(b.t(1) == doctest::Approx(0.5));

  const auto c = markov_trace(validate_bratteli(ivec({1}), ivec({1, 1}), imat({{1}, {1}})));
  CHECK(c.s(0) == doctest::Approx(0.5));
  CHECK(c.s(1) == doctest::Approx(0.5));
  CHECK(c.t(0) == doctest::Approx(1.0));
}

TEST_CASE("trace_expectation_weights examples") {
  CHECK(trace_expectation_weights(validate_bratteli(ivec({1}), ivec({4}), imat({{4}}))).lambda ==
        dmat({{1}}));
  const auto b = trace_expectation_weights(validate_bratteli(ivec({1}), ivec({1, 1}), imat({{1}, {1}})));
  CHECK(b.lambda(0, 0) == doctest::Approx(0.5));
  CHECK(b.lambda(1, 0) == doctest::Approx(0.5));
  const auto c = trace_expectation_weights(validate_bratteli(ivec({1, 1}), ivec({2}), imat({{1, 1}})));
  CHECK(c.lambda(0, 0) == doctest::Approx(1.0));
  CHECK(c.lambda(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("extremality examples") {
  CHECK(is_extremal(validate_bratteli(ivec({1, 1}), ivec({2}), imat({{1, 1}}))));
  CHECK(is_extremal(from_lambda(ivec({1, 1}), imat({{1, 1}, {0, 1}}))));
  CHECK(is_extremal(validate_bratteli(ivec({2}), ivec({6}), imat({{3}}))));
  try {
    is_extremal(from_lambda(ivec({1, 1}), imat({{1, 0}, {0, 1}})));
    FAIL("expected not_connected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_connected);
  }
}

TEST_CASE("super-extremality examples") {
  const auto a = validate_bratteli(ivec({1, 1}), ivec({2}), imat({{1, 1}}));
  CHECK(is_super_extremal(a));
  CHECK(super_extremal_index(a) == 2);

  const auto b = validate_bratteli(ivec({1, 2}), ivec({3}), imat({{1, 1}}));
  CHECK_FALSE(is_super_extremal(b));
  try {
    super_extremal_index(b);
    FAIL("expected not_super_extremal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_super_extremal);
  }

  for (std::int64_t r = 1; r <= 5; ++r) {
    const auto f = validate_bratteli(ivec({1}), ivec({r}), imat({{r}}));
    CHECK(is_super_extremal(f));
    CHECK(super_extremal_index(f) == r * r);
  }
  for (int n = 1; n <= 6; ++n) {
    const auto c = from_lambda(IntVector::Ones(n), IntMatrix::Ones(1, n));
    CHECK(super_extremal_index(c) == n);
  }
}

TEST_CASE("extremality_report fields") {
  const auto r = extremality_report(validate_bratteli(ivec({1, 2}), ivec({3}), imat({{1, 1}})));
  CHECK(r.extremal);
  CHECK_FALSE(r.super_extremal);
  CHECK_FALSE(r.index.has_value());
  const auto s = extremality_report(validate_bratteli(ivec({1, 1}), ivec({2}), imat({{1, 1}})));
  CHECK(s.super_extremal);
  CHECK(s.index == std::optional<std::int64_t>(2));
}

TEST_CASE("bratteli compose") {
  const auto inner = validate_bratteli(ivec({1}), ivec({1, 1}), imat({{1}, {1}}));
  const auto outer = validate_bratteli(ivec({1, 1}), ivec({2}), imat({{1, 1}}));
  const auto c = compose(inner, outer);
  CHECK(c.lambda() == imat({{2}}));
  CHECK(c.small().dims() == ivec({1}));
  CHECK(c.large().dims() == ivec({2}));
  CHECK(super_extremal_index(c) == super_extremal_index(inner) * super_extremal_index(outer));
  try {
    compose(outer, outer);
    FAIL("expected shape");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::shape);
  }
}

TEST_CASE("Markov property and extremality on a small exhaustive family") {
  const auto family = enumerate_connected({3, 2, 6});
  REQUIRE(family.size() > 50);
  for (const auto& b : family) {
    const auto tau = markov_trace(b);
    const Eigen::MatrixXd l = b.lambda().cast<double>();
    const double index = minimal_index(dimension_matrix_of(b));
    CHECK((l * l.transpose() * tau.s - index * tau.s).norm() <= 1e-9);
    CHECK(std::abs(b.large().dims().cast<double>().dot(tau.s) - 1.0) <= 1e-12);
    CHECK(is_extremal(b));

    const auto et = trace_expectation_weights(b);
    const auto ind = index_of_expectation(dimension_matrix_of(b), et);
    CHECK((ind.values.array() - index).abs().maxCoeff() <= 1e-9 * index);

    const auto states = canonical_states(dimension_matrix_of(b));
    const Eigen::VectorXd kt = b.small().dims().cast<double>().cwiseProduct(tau.t);
    const bool float_test = (states.left - kt).cwiseAbs().maxCoeff() <= 1e-9;
    CHECK(float_test == is_super_extremal(b));
    if (is_super_extremal(b)) {
      CHECK(std::abs(static_cast<double>(super_extremal_index(b)) - index) <= 1e-6);
    }
  }
}

TEST_CASE("enumerate_connected matches a brute-force class count") {
  for (const auto& [s, e, k] : std::vector<std::tuple<int, int, int>>{{2, 2, 4}, {3, 1, 3}, {2, 3, 5}}) {
    const auto found = enumerate_connected({s, e, k});
    const auto oracle = brute_force_family(s, e, k);
    CHECK(found.size() == oracle.size());
    std::set<Key> classes;
    for (const auto& b : found) classes.insert(brute_force_class(b.small().dims(), b.lambda()));
    CHECK(classes == oracle);
  }
}

TEST_CASE("canonical_form is invariant under relabeling") {
  std::mt19937_64 rng(31);
  const auto family = enumerate_connected({3, 2, 6});
  for (const auto& b : family) {
    Eigen::PermutationMatrix<Eigen::Dynamic> pr(b.rows()), pc(b.cols());
    pr.setIdentity();
    pc.setIdentity();
    std::shuffle(pr.indices().data(), pr.indices().data() + b.rows(), rng);
    std::shuffle(pc.indices().data(), pc.indices().data() + b.cols(), rng);
    const IntMatrix l = pr * b.lambda() * pc;
    const IntVector k = pc.transpose() * b.small().dims();
    const auto shuffled = from_lambda(k, l);
    const auto canon = canonical_form(shuffled);
    CHECK(canon.lambda() == b.lambda());
    CHECK(canon.small().dims() == b.small().dims());
  }
}

TEST_CASE("enumerate_super_extremal examples") {
  auto contains = [](const std::vector<BratteliInclusion>& list, const IntVector& k, const IntMatrix& l) {
    return std::any_of(list.begin(), list.end(), [&](const BratteliInclusion& b) {
      return same(b.small().dims(), k) && same(b.lambda(), l);
    });
  };
  const auto two = enumerate_super_extremal(2, {2, 1, 2});
  CHECK(contains(two, ivec({1, 1}), imat({{1, 1}})));
  const auto three = enumerate_super_extremal(3, {3, 1, 3});
  CHECK(contains(three, ivec({1, 1, 1}), imat({{1, 1, 1}})));
  CHECK(enumerate_super_extremal(5, {1, 3, 5}).empty());
  const auto five = enumerate_super_extremal(5, {5, 1, 5});
  CHECK(contains(five, IntVector::Ones(5), IntMatrix::Ones(1, 5)));

  for (const auto& b : enumerate_super_extremal(1, {3, 3, 6})) {
    CHECK(b.rows() == 1);
    CHECK(b.cols() == 1);
    CHECK(b.lambda()(0, 0) == 1);
  }
}

TEST_CASE("enumerate_super_extremal agrees with filtering the connected family") {
  const EnumerationBounds bounds{3, 2, 6};
  std::map<std::int64_t, std::size_t> expected;
  for (const auto& b : enumerate_connected(bounds)) {
    if (is_super_extremal(b)) ++expected[super_extremal_index(b)];
  }
  for (const auto& [index, count] : expected) {
    const auto found = enumerate_super_extremal(index, bounds);
    CHECK(found.size() == count);
    for (const auto& b : found) CHECK(super_extremal_index(b) == index);
  }
}

TEST_CASE("multiplicativity on composable super-extremal pairs") {
  const auto family = enumerate_connected({2, 2, 4});
  int checked = 0;
  for (const auto& a : family) {
    if (!is_super_extremal(a)) continue;
    for (const auto& b : family) {
      if (!is_super_extremal(b) || !same(a.large().dims(), b.small().dims())) {
        continue;
      }
      const auto c = compose(a, b);
      if (!is_connected(c) || !is_super_extremal(c)) continue;
      CHECK(super_extremal_index(c) == super_extremal_index(a) * super_extremal_index(b));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("enumeration bounds are validated") {
  try {
    enumerate_connected({0, 1, 1});
    FAIL("expected invalid_value");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_value);
  }
}

TEST_CASE("Markov property on random inclusions with entries up to 6") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(1, 4), entry(0, 6), dim(1, 5);
  int checked = 0;
  while (checked < 300) {
    const int m = size(rng), n = size(rng);
    IntMatrix l(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) l(i, j) = entry(rng);
    }
    if (!union_find_connected(l.cast<double>()) ||
        (l.rowwise().sum().array() == 0).any() || (l.colwise().sum().array() == 0).any()) {
      continue;
    }
    IntVector k(n);
    for (int j = 0; j < n; ++j) k(j) = dim(rng);
    const auto b = from_lambda(k, l);
    const auto tau = markov_trace(b);
    const Eigen::MatrixXd ld = l.cast<double>();
    const double index = minimal_index(dimension_matrix_of(b));
    CHECK((ld * ld.transpose() * tau.s - index * tau.s).norm() <= 1e-9 * std::max(1.0, index));
    CHECK((tau.t - ld.transpose() * tau.s).norm() <= 1e-14);
    CHECK(is_extremal(b));
    ++checked;
  }
}
