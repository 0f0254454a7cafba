#include "spooftrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stb {

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged cost matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

std::size_t Assignment::num_assigned() const {
  return static_cast<std::size_t>(
      std::count_if(row_to_col.begin(), row_to_col.end(), [](const auto& c) { return c.has_value(); }));
}

double assignment_cost(const CostMatrix& costs, const Assignment& assignment, double miss_cost) {
  double total = 0.0;
  for (std::size_t r = 0; r < assignment.row_to_col.size(); ++r) {
    total += assignment.row_to_col[r] ? costs(r, *assignment.row_to_col[r]) : miss_cost;
  }
  return total;
}

Assignment hungarian(const CostMatrix& costs, double miss_cost) {
  const std::size_t n = costs.rows();
  const std::size_t m = costs.cols();
  Assignment result;
  result.row_to_col.assign(n, std::nullopt);
  if (n == 0 || m == 0) return result;

  double max_finite = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double v = costs(r, c);
      if (v == kForbidden) continue;
      if (!(v >= 0.0) || std::isinf(v)) throw std::invalid_argument("costs must be non-negative");
      max_finite = std::max(max_finite, v);
    }
  }
  if (std::isnan(miss_cost) || miss_cost < 0.0) throw std::invalid_argument("invalid miss cost");
  // One extra assigned row always outweighs any difference in assigned cost.
  const double miss = std::isinf(miss_cost) ? static_cast<double>(n) * max_finite + 1.0 : miss_cost;
  const double big = static_cast<double>(n + 1) * (max_finite + miss) + 1.0;

  // Square-ish augmentation: m real columns followed by one private dummy column per row.
  const std::size_t cols = m + n;
  auto cell = [&](std::size_t r, std::size_t c) {
    if (c < m) return costs.allowed(r, c) ? costs(r, c) : big;
    return c - m == r ? miss : big;
  };

  // Shortest augmenting path with potentials, 1-indexed; column 0 is a sentinel.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cell(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const std::size_t r = p[j] - 1;
    if (costs.allowed(r, j - 1)) result.row_to_col[r] = j - 1;
  }
  return result;
}

}  // namespace stb
