#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "netmirror/errors.hpp"
#include "netmirror/types.hpp"

namespace netmirror {

/// Exact linear assignment by shortest augmenting paths (O(n^3)).
/// Returns the row -> column mapping optimizing sum_i cost(i, sigma(i));
/// minimizes by default, maximizes when `maximize` is set. Deterministic:
/// ties resolve toward the lowest column index.
template <typename Derived>
std::vector<Index> lap_solve(const Eigen::MatrixBase<Derived>& cost_expr, bool maximize) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> cost = cost_expr;
  if (cost.rows() != cost.cols())
    throw DomainError("lap_solve: cost matrix must be square");
  const Index n = cost.rows();
  if (n == 0) throw DomainError("lap_solve: empty cost matrix");
  if (!cost.allFinite()) throw DomainError("lap_solve: cost entries must be finite");
  if (maximize) cost = -cost;

  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> u(n + 1, Scalar(0)), v(n + 1, Scalar(0));
  std::vector<Index> match(n + 1, 0);  // match[j] = row assigned to column j (1-based)
  std::vector<Index> way(n + 1, 0);

  for (Index i = 1; i <= n; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<Scalar> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Index i0 = match[j0];
      Index j1 = 0;
      Scalar delta = inf;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Scalar cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> assignment(n, -1);
  for (Index j = 1; j <= n; ++j)
    if (match[j] != 0) assignment[match[j] - 1] = j - 1;
  return assignment;
}

}  // namespace netmirror
