#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace hagmn {

/// Row-major dense matrix of doubles. The only tensor type in the project;
/// column vectors are n x 1, row vectors 1 x n.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  static DenseMatrix zeros(std::size_t r, std::size_t c) { return {r, c, 0.0}; }
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rws);

  std::size_t size() const { return rows * cols; }
  bool empty() const { return size() == 0; }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool same_shape(const DenseMatrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
  bool operator==(const DenseMatrix& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

// Dense products. a*b, a*b^T and a^T*b cover forward and both backward terms.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scaled(const DenseMatrix& a, double s);

void add_inplace(DenseMatrix& dst, const DenseMatrix& src);
void axpy_inplace(DenseMatrix& dst, double alpha, const DenseMatrix& src);

/// Throws std::runtime_error naming `what` if any entry is NaN or infinite.
void check_finite(const DenseMatrix& m, const std::string& what);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace hagmn
