#include "hagmn/hungarian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hagmn {

DenseMatrix Assignment::to_matrix() const {
  DenseMatrix m(row_to_col.size(), n_cols);
  for (std::size_t i = 0; i < row_to_col.size(); ++i)
    if (row_to_col[i] >= 0) m.at(i, static_cast<std::size_t>(row_to_col[i])) = 1.0;
  return m;
}

double Assignment::total_cost(const DenseMatrix& cost) const {
  double s = 0.0;
  for (std::size_t i = 0; i < row_to_col.size(); ++i)
    if (row_to_col[i] >= 0) s += cost.at(i, static_cast<std::size_t>(row_to_col[i]));
  return s;
}

namespace {

/// Jonker-Volgenant shortest augmenting paths, requires rows <= cols.
/// 1-indexed with column 0 as the sentinel.
std::vector<int> solve_rows_le_cols(const DenseMatrix& a) {
  const int n = static_cast<int>(a.rows);
  const int m = static_cast<int>(a.cols);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a.at(static_cast<std::size_t>(i0 - 1),
                                static_cast<std::size_t>(j - 1)) -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j)
    if (p[static_cast<std::size_t>(j)] != 0)
      row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return row_to_col;
}

}  // namespace

Assignment hungarian(const DenseMatrix& cost) {
  if (cost.rows == 0 || cost.cols == 0)
    throw std::invalid_argument("hungarian: empty cost matrix");
  for (double c : cost.data)
    if (!std::isfinite(c)) throw std::invalid_argument("hungarian: non-finite cost entry");

  Assignment out;
  out.n_cols = cost.cols;
  if (cost.rows <= cost.cols) {
    out.row_to_col = solve_rows_le_cols(cost);
  } else {
    const std::vector<int> col_to_row = solve_rows_le_cols(transpose(cost));
    out.row_to_col.assign(cost.rows, -1);
    for (std::size_t j = 0; j < col_to_row.size(); ++j)
      if (col_to_row[j] >= 0)
        out.row_to_col[static_cast<std::size_t>(col_to_row[j])] = static_cast<int>(j);
  }
  return out;
}

}  // namespace hagmn
