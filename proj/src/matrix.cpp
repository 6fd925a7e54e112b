#include "hagmn/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hagmn {

namespace {

using EigenMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstEigenMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

ConstEigenMap map(const DenseMatrix& m) {
  return ConstEigenMap(m.data.data(), static_cast<Eigen::Index>(m.rows),
                       static_cast<Eigen::Index>(m.cols));
}

EigenMap map(DenseMatrix& m) {
  return EigenMap(m.data.data(), static_cast<Eigen::Index>(m.rows),
                  static_cast<Eigen::Index>(m.cols));
}

[[noreturn]] void shape_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                              std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                              std::to_string(b.rows) + "x" + std::to_string(b.cols) + ")");
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rws) {
  DenseMatrix m(rws.size(), rws.size() ? rws.begin()->size() : 0);
  std::size_t i = 0;
  for (const auto& row : rws) {
    if (row.size() != m.cols) throw std::invalid_argument("from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) shape_error("matmul", a, b);
  DenseMatrix out(a.rows, b.cols);
  if (!out.empty() && a.cols > 0) map(out).noalias() = map(a) * map(b);
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.cols) shape_error("matmul_nt", a, b);
  DenseMatrix out(a.rows, b.rows);
  if (!out.empty() && a.cols > 0) map(out).noalias() = map(a) * map(b).transpose();
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows) shape_error("matmul_tn", a, b);
  DenseMatrix out(a.cols, b.cols);
  if (!out.empty() && a.rows > 0) map(out).noalias() = map(a).transpose() * map(b);
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) shape_error("hadamard", a, b);
  DenseMatrix out(a.rows, a.cols);
  for (std::size_t k = 0; k < a.size(); ++k) out.data[k] = a.data[k] * b.data[k];
  return out;
}

DenseMatrix scaled(const DenseMatrix& a, double s) {
  DenseMatrix out = a;
  for (double& v : out.data) v *= s;
  return out;
}

void add_inplace(DenseMatrix& dst, const DenseMatrix& src) {
  if (!dst.same_shape(src)) shape_error("add_inplace", dst, src);
  for (std::size_t k = 0; k < dst.size(); ++k) dst.data[k] += src.data[k];
}

void axpy_inplace(DenseMatrix& dst, double alpha, const DenseMatrix& src) {
  if (!dst.same_shape(src)) shape_error("axpy_inplace", dst, src);
  for (std::size_t k = 0; k < dst.size(); ++k) dst.data[k] += alpha * src.data[k];
}

void check_finite(const DenseMatrix& m, const std::string& what) {
  for (double v : m.data) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("non-finite value in " + what);
    }
  }
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) shape_error("max_abs_diff", a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

}  // namespace hagmn
