#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "minidx/algebra.hpp"

namespace minidx::test {

inline IntVector ivec(std::initializer_list<std::int64_t> v) {
  IntVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index p = 0;
  for (const auto x : v) out(p++) = x;
  return out;
}

inline IntMatrix imat(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  IntMatrix out(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto x : row) out(i, j++) = x;
    ++i;
  }
  return out;
}

inline Eigen::MatrixXd dmat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd out(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto x : row) out(i, j++) = x;
    ++i;
  }
  return out;
}

// Shape-safe equality (Eigen's operator== asserts on mismatched sizes).
template <typename A, typename B>
bool same(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

// Bratteli inclusion from k and Λ, with h = Λk.
inline BratteliInclusion from_lambda(const IntVector& k, const IntMatrix& l) {
  return validate_bratteli(k, l * k, l);
}

// Independent connectivity check: union-find over rows then columns.
inline bool union_find_connected(const Eigen::MatrixXd& d) {
  const auto m = d.rows(), n = d.cols();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(m + n));
  for (std::size_t p = 0; p < parent.size(); ++p) parent[p] = static_cast<Eigen::Index>(p);
  auto find = [&](Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d(i, j) != 0.0) parent[static_cast<std::size_t>(find(i))] = find(m + j);
    }
  }
  const auto root = find(0);
  for (Eigen::Index x = 1; x < m + n; ++x) {
    if (find(x) != root) return false;
  }
  return true;
}

// Random dimension matrix: size up to max_size per side, entries in {0} ∪ [1, 4],
// no zero row or column. Connected only if `connected` (by resampling).
inline Eigen::MatrixXd random_dimension_matrix(std::mt19937_64& rng, int max_size, bool connected) {
  std::uniform_int_distribution<int> size(1, max_size);
  std::uniform_real_distribution<double> entry(1.0, 4.0);
  std::bernoulli_distribution zero(0.35);
  for (;;) {
    const int m = size(rng), n = size(rng);
    Eigen::MatrixXd d(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = zero(rng) ? 0.0 : entry(rng);
    }
    if ((d.rowwise().sum().array() == 0.0).any() || (d.colwise().sum().array() == 0.0).any()) continue;
    if (connected && !union_find_connected(d)) continue;
    return d;
  }
}

}  // namespace minidx::test
