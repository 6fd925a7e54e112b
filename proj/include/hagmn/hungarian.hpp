#pragma once

#include <vector>

#include "hagmn/matrix.hpp"

namespace hagmn {

/// One-to-one / one-to-zero correspondence. row_to_col[i] is the assigned
/// column of row i, or -1. Row and column sums of the matrix form are <= 1.
struct Assignment {
  std::vector<int> row_to_col;
  std::size_t n_cols = 0;

  DenseMatrix to_matrix() const;
  double total_cost(const DenseMatrix& cost) const;
};

/// Minimum-total-cost assignment of min(rows, cols) pairs via shortest
/// augmenting paths (Jonker-Volgenant). Rectangular inputs are handled in
/// both orientations; ties break toward the lowest column index. Throws on
/// non-finite costs.
Assignment hungarian(const DenseMatrix& cost);

}  // namespace hagmn
