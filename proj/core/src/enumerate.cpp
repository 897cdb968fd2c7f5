#include <algorithm>
#include <compare>
#include <functional>
#include <numeric>
#include <set>

#include "minidx/errors.hpp"
#include "minidx/multimatrix.hpp"

namespace minidx {

namespace {

using Row = std::vector<std::int64_t>;

// Sort key of a canonical inclusion; also the output order.
struct InclusionKey {
  std::size_t n = 0;
  std::size_t m = 0;
  Row k;
  std::vector<Row> rows;

  auto operator<=>(const InclusionKey&) const = default;
};

// One position of the column-order search: the k value of the chosen column
// followed by that column of the row-sorted prefix matrix.
struct ColumnKey {
  std::int64_t k = 0;
  Row column;

  auto operator<=>(const ColumnKey&) const = default;
};

class CanonicalSearch {
 public:
  CanonicalSearch(const IntVector& k, const IntMatrix& lambda)
      : k_(k), lambda_(lambda), used_(static_cast<std::size_t>(k.size()), false) {}

  std::vector<Eigen::Index> run() {
    dfs();
    return best_perm_;
  }

 private:
  std::vector<Eigen::Index> sorted_rows() const {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(lambda_.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      for (const auto c : perm_) {
        if (lambda_(a, c) != lambda_(b, c)) return lambda_(a, c) < lambda_(b, c);
      }
      return a < b;
    });
    return order;
  }

  bool same_column(Eigen::Index a, Eigen::Index b) const {
    return k_(a) == k_(b) && lambda_.col(a) == lambda_.col(b);
  }

  // True if the current prefix is lexicographically above the best prefix.
  bool dominated() const {
    if (best_.empty()) return false;
    for (std::size_t p = 0; p < current_.size(); ++p) {
      const auto cmp = current_[p] <=> best_[p];
      if (cmp != 0) return cmp > 0;
    }
    return false;
  }

  void dfs() {
    const auto n = static_cast<std::size_t>(k_.size());
    if (perm_.size() == n) {
      if (best_.empty() || current_ < best_) {
        best_ = current_;
        best_perm_ = perm_;
      }
      return;
    }
    // Identical columns are interchangeable; branch on one representative.
    std::vector<std::pair<ColumnKey, Eigen::Index>> candidates;
    for (std::size_t c = 0; c < n; ++c) {
      if (used_[c]) continue;
      const auto col = static_cast<Eigen::Index>(c);
      bool duplicate = false;
      for (const auto& cand : candidates) duplicate = duplicate || same_column(cand.second, col);
      if (duplicate) continue;
      perm_.push_back(col);
      const auto order = sorted_rows();
      perm_.pop_back();
      ColumnKey key{k_(col), {}};
      for (const auto r : order) key.column.push_back(lambda_(r, col));
      candidates.emplace_back(std::move(key), col);
    }
    std::sort(candidates.begin(), candidates.end());
    for (auto& [key, col] : candidates) {
      current_.push_back(key);
      if (!dominated()) {
        used_[col] = true;
        perm_.push_back(col);
        dfs();
        perm_.pop_back();
        used_[col] = false;
      }
      current_.pop_back();
    }
  }

  const IntVector& k_;
  const IntMatrix& lambda_;
  std::vector<bool> used_;
  std::vector<Eigen::Index> perm_;
  std::vector<ColumnKey> current_;
  std::vector<ColumnKey> best_;
  std::vector<Eigen::Index> best_perm_;
};

InclusionKey canonical_key(const IntVector& k, const IntMatrix& lambda) {
  const auto perm = CanonicalSearch(k, lambda).run();
  InclusionKey key;
  key.n = static_cast<std::size_t>(k.size());
  key.m = static_cast<std::size_t>(lambda.rows());
  for (const auto c : perm) key.k.push_back(k(c));
  for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
    Row row;
    for (const auto c : perm) row.push_back(lambda(i, c));
    key.rows.push_back(std::move(row));
  }
  std::sort(key.rows.begin(), key.rows.end());
  return key;
}

BratteliInclusion from_key(const InclusionKey& key) {
  const auto n = static_cast<Eigen::Index>(key.n);
  const auto m = static_cast<Eigen::Index>(key.m);
  IntVector k(n);
  IntMatrix lambda(m, n);
  for (Eigen::Index j = 0; j < n; ++j) k(j) = key.k[j];
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) lambda(i, j) = key.rows[i][j];
  }
  return validate_bratteli(k, lambda * k, lambda);
}

void check_bounds(const EnumerationBounds& bounds) {
  if (bounds.max_summands < 1 || bounds.max_entry < 1 || bounds.max_dim < 1) {
    throw Error(Errc::invalid_value, "enumeration bounds must be >= 1");
  }
}

// Calls visit(k) for every nondecreasing k in [1, max_dim]^n accepted by keep.
void for_each_dims(std::size_t n, std::int64_t max_dim,
                   const std::function<bool(const Row&)>& keep,
                   const std::function<void(const Row&)>& visit) {
  Row k;
  std::function<void(std::int64_t)> rec = [&](std::int64_t lo) {
    if (k.size() == n) {
      visit(k);
      return;
    }
    for (std::int64_t v = lo; v <= max_dim; ++v) {
      k.push_back(v);
      if (keep(k)) rec(v);
      k.pop_back();
    }
  };
  rec(1);
}

// Candidate rows of Λ for a fixed k, grouped by their first nonzero column.
struct RowTable {
  std::vector<Row> rows;
  std::vector<std::size_t> first;  // first nonzero column of rows[r]
  std::vector<std::int64_t> image; // rows[r] · k
};

RowTable candidate_rows(const Row& k, std::int64_t max_entry, std::int64_t max_dim) {
  const std::size_t n = k.size();
  RowTable table;
  Row r(n, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t pos, std::int64_t dot) {
    if (pos == n) {
      if (dot == 0) return;
      const auto first = static_cast<std::size_t>(
          std::find_if(r.begin(), r.end(), [](std::int64_t v) { return v != 0; }) - r.begin());
      table.rows.push_back(r);
      table.first.push_back(first);
      table.image.push_back(dot);
      return;
    }
    for (std::int64_t v = 0; v <= max_entry && dot + v * k[pos] <= max_dim; ++v) {
      r[pos] = v;
      rec(pos + 1, dot + v * k[pos]);
    }
    r[pos] = 0;
  };
  rec(0, 0);

  std::vector<std::size_t> order(table.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return table.first[a] < table.first[b]; });
  RowTable sorted;
  for (const auto idx : order) {
    sorted.rows.push_back(table.rows[idx]);
    sorted.first.push_back(table.first[idx]);
    sorted.image.push_back(table.image[idx]);
  }
  return sorted;
}

// Builds (k, Λ) from chosen row indices and inserts its canonical key if the
// inclusion is connected.
void record(const Row& k, const RowTable& table, const std::vector<std::size_t>& chosen,
            std::set<InclusionKey>& out) {
  const auto n = static_cast<Eigen::Index>(k.size());
  const auto m = static_cast<Eigen::Index>(chosen.size());
  IntVector kv(n);
  IntMatrix lambda(m, n);
  for (Eigen::Index j = 0; j < n; ++j) kv(j) = k[j];
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) lambda(i, j) = table.rows[chosen[i]][j];
  }
  const auto b = validate_bratteli(kv, lambda * kv, lambda);
  if (!is_connected(b)) return;
  out.insert(canonical_key(kv, lambda));
}

std::vector<BratteliInclusion> materialize(const std::set<InclusionKey>& keys) {
  std::vector<BratteliInclusion> out;
  out.reserve(keys.size());
  for (const auto& key : keys) out.push_back(from_key(key));
  return out;
}

}  // namespace

BratteliInclusion canonical_form(const BratteliInclusion& b) {
  return from_key(canonical_key(b.small().dims(), b.lambda()));
}

std::vector<BratteliInclusion> enumerate_connected(const EnumerationBounds& bounds) {
  check_bounds(bounds);
  std::set<InclusionKey> found;
  const auto max_rows = static_cast<std::size_t>(bounds.max_summands);

  for (std::size_t n = 1; n <= max_rows; ++n) {
    for_each_dims(
        n, bounds.max_dim, [](const Row&) { return true; },
        [&](const Row& k) {
          const RowTable table = candidate_rows(k, bounds.max_entry, bounds.max_dim);
          std::vector<std::size_t> chosen;
          std::vector<int> cover(n, 0);

          // Rows are taken as a multiset in table order. A column j can only be
          // hit by rows whose first nonzero column is <= j, so once the scan
          // passes that block the column must already be covered.
          std::function<void(std::size_t)> dfs = [&](std::size_t start) {
            if (!chosen.empty() &&
                std::all_of(cover.begin(), cover.end(), [](int c) { return c > 0; })) {
              record(k, table, chosen, found);
            }
            if (chosen.size() == max_rows) return;
            for (std::size_t idx = start; idx < table.rows.size(); ++idx) {
              const std::size_t block = table.first[idx];
              bool blocked = false;
              for (std::size_t j = 0; j < block; ++j) blocked = blocked || cover[j] == 0;
              if (blocked) break;
              chosen.push_back(idx);
              for (std::size_t j = 0; j < n; ++j) cover[j] += table.rows[idx][j] != 0;
              dfs(idx);
              for (std::size_t j = 0; j < n; ++j) cover[j] -= table.rows[idx][j] != 0;
              chosen.pop_back();
            }
          };
          dfs(0);
        });
  }
  return materialize(found);
}

std::vector<BratteliInclusion> enumerate_super_extremal(std::int64_t target_index,
                                                        const EnumerationBounds& bounds) {
  check_bounds(bounds);
  if (target_index < 1) throw Error(Errc::invalid_value, "target index must be >= 1");
  std::set<InclusionKey> found;
  const auto max_rows = static_cast<std::size_t>(bounds.max_summands);
  const std::int64_t target = target_index;

  // Super-extremality reads Σ_i Λ_ij h_i = T k_j with h_i <= max_dim, so
  // T k_j <= m E K and T Σ k_j² = Σ h_i² <= m K².
  const std::int64_t cap_entry = bounds.max_summands * bounds.max_entry * bounds.max_dim;
  const std::int64_t cap_square = bounds.max_summands * bounds.max_dim * bounds.max_dim;
  auto keep = [&](const Row& k) {
    std::int64_t squares = 0;
    for (const auto v : k) squares += v * v;
    return target * k.back() <= cap_entry && target * squares <= cap_square;
  };

  for (std::size_t n = 1; n <= max_rows; ++n) {
    for_each_dims(n, bounds.max_dim, keep, [&](const Row& k) {
      const RowTable table = candidate_rows(k, bounds.max_entry, bounds.max_dim);
      Row goal(n), partial(n, 0);
      for (std::size_t j = 0; j < n; ++j) goal[j] = target * k[j];
      std::vector<std::size_t> chosen;

      // Each row r adds (r·k) r to ΛᵗΛk; the partial sum may never exceed T k.
      std::function<void(std::size_t)> dfs = [&](std::size_t start) {
        if (partial == goal) {
          record(k, table, chosen, found);
          return;
        }
        if (chosen.size() == max_rows) return;
        for (std::size_t idx = start; idx < table.rows.size(); ++idx) {
          const std::size_t block = table.first[idx];
          bool blocked = false;
          for (std::size_t j = 0; j < block; ++j) blocked = blocked || partial[j] != goal[j];
          if (blocked) break;
          const auto& row = table.rows[idx];
          const std::int64_t h = table.image[idx];
          bool fits = true;
          for (std::size_t j = 0; j < n && fits; ++j) fits = partial[j] + row[j] * h <= goal[j];
          if (!fits) continue;
          chosen.push_back(idx);
          for (std::size_t j = 0; j < n; ++j) partial[j] += row[j] * h;
          dfs(idx);
          for (std::size_t j = 0; j < n; ++j) partial[j] -= row[j] * h;
          chosen.pop_back();
        }
      };
      dfs(0);
    });
  }

  auto out = materialize(found);
  for (const auto& b : out) {
    if (super_extremal_index(b) != target_index) {
      throw Error(Errc::integrality, "enumerator produced an inclusion with the wrong index");
    }
  }
  return out;
}

}  // namespace minidx
