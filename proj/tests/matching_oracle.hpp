#pragma once

// Exhaustive matching oracle: maximum total weight over all partial
// injective row->column assignments. Only viable for tiny matrices.
#include <functional>
#include <vector>

namespace dehealth::testing {

inline double best_matching_weight(
    const std::vector<std::vector<double>>& w,
    const std::vector<std::vector<bool>>* excluded = nullptr) {
  const std::size_t n = w.size();
  const std::size_t m = n == 0 ? 0 : w[0].size();
  double best = 0.0;
  std::vector<bool> col_used(m, false);
  std::function<void(std::size_t, double)> rec = [&](std::size_t row,
                                                     double acc) {
    if (acc > best) best = acc;
    if (row == n) return;
    rec(row + 1, acc);  // leave this row unmatched
    for (std::size_t j = 0; j < m; ++j) {
      if (col_used[j]) continue;
      if (excluded != nullptr && (*excluded)[row][j]) continue;
      col_used[j] = true;
      rec(row + 1, acc + w[row][j]);
      col_used[j] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

}  // namespace dehealth::testing
