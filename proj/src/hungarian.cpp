#include "planforge/hungarian.hpp"

#include <algorithm>
#include <limits>

namespace planforge::metrics {

// Shortest augmenting path formulation with row/column potentials, O(n^3).
// Rectangular inputs are padded to square with zero-cost dummy entries.
std::vector<int> hungarian_assign(const std::vector<double>& cost, int rows, int cols) {
  const int n = std::max(rows, cols);
  if (n == 0) return {};
  const double kInf = std::numeric_limits<double>::infinity();

  auto c = [&](int r, int col) -> double {
    if (r >= rows || col >= cols) return 0.0;
    return cost[static_cast<std::size_t>(r) * cols + col];
  };

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, n), way(n + 1, n);  // p[col] = row matched to col

  for (int i = 0; i < n; ++i) {
    p[n] = i;
    int j0 = n;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        double cur = c(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }

  std::vector<int> match(rows, -1);
  for (int j = 0; j < cols; ++j) {
    if (p[j] < rows) match[p[j]] = j;
  }
  return match;
}

}  // namespace planforge::metrics
