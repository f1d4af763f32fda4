#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dehealth {

// Maximum-weight bipartite assignment (Kuhn-Munkres with potentials,
// O(n^2 m)). Returns row -> column; every row is assigned, so callers that
// want partial matchings encode unusable pairs as large negative weights
// and drop those pairs afterwards.
inline std::vector<std::size_t> max_weight_assignment(
    std::size_t n_rows, std::size_t n_cols,
    const std::function<double(std::size_t, std::size_t)>& weight) {
  if (n_rows == 0 || n_cols == 0)
    throw std::invalid_argument("max_weight_assignment: empty side");
  if (n_rows > n_cols) {
    // Solve the transpose and invert the assignment.
    const auto col_to_row = max_weight_assignment(
        n_cols, n_rows,
        [&](std::size_t c, std::size_t r) { return weight(r, c); });
    std::vector<std::size_t> row_to_col(n_rows, static_cast<std::size_t>(-1));
    for (std::size_t c = 0; c < n_cols; ++c) row_to_col[col_to_row[c]] = c;
    return row_to_col;
  }

  const double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = n_rows, m = n_cols;
  // 1-based arrays; p[j] = row matched to column j (0 = free). Minimizes
  // cost = -weight.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
  std::vector<std::size_t> row_to_col(n, static_cast<std::size_t>(-1));
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace dehealth
