#include "vsa/assignment.hpp"

#include "vsa/types.hpp"

#include <limits>

namespace vsa {

// Shortest augmenting path Hungarian method with row/column potentials,
// O(n^2 m). Arrays are 1-based with index 0 as the virtual source column.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw ContractError("min_cost_assignment: more rows than columns");
  if (!cost.allFinite()) throw ContractError("min_cost_assignment: non-finite cost");
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  auto at = [](auto& vec, int i) -> auto& { return vec[static_cast<std::size_t>(i)]; };

  for (int i = 1; i <= n; ++i) {
    at(match, 0) = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      at(used, j0) = 1;
      const int i0 = at(match, j0);
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (at(used, j)) continue;
        const double cur = cost(i0 - 1, j - 1) - at(u, i0) - at(v, j);
        if (cur < at(minv, j)) {
          at(minv, j) = cur;
          at(way, j) = j0;
        }
        if (at(minv, j) < delta) {
          delta = at(minv, j);
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (at(used, j)) {
          at(u, at(match, j)) += delta;
          at(v, j) -= delta;
        } else {
          at(minv, j) -= delta;
        }
      }
      j0 = j1;
    } while (at(match, j0) != 0);
    do {
      const int j1 = at(way, j0);
      at(match, j0) = at(match, j1);
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j)
    if (at(match, j) != 0) row_to_col[static_cast<std::size_t>(at(match, j) - 1)] = j - 1;
  return row_to_col;
}

}  // namespace vsa
