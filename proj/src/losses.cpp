#include "hagmn/losses.hpp"

#include <stdexcept>

namespace hagmn {

DenseMatrix flatten_to_column(const DenseMatrix& m) {
  DenseMatrix out(m.size(), 1);
  out.data = m.data;
  return out;
}

NodeId perm_loss(Tape& tape, NodeId match_prob, const DenseMatrix& assignment) {
  const DenseMatrix& p = tape.value(match_prob);
  DenseMatrix target = assignment;
  if (p.cols == 1 && p.rows == assignment.size()) {
    target = flatten_to_column(assignment);
  } else if (!p.same_shape(assignment)) {
    throw std::invalid_argument("perm_loss: shape mismatch");
  }
  return tape.bce_sum(match_prob, std::move(target));
}

DenseMatrix tcp_target(const DenseMatrix& match_prob, const DenseMatrix& assignment) {
  if (!match_prob.same_shape(assignment))
    throw std::invalid_argument("tcp_target: shape mismatch");
  DenseMatrix out(match_prob.rows, match_prob.cols);
  for (std::size_t k = 0; k < out.size(); ++k)
    out.data[k] = assignment.data[k] * match_prob.data[k];
  return out;
}

NodeId tcp_loss(Tape& tape, NodeId tcp_approx, const DenseMatrix& target) {
  const DenseMatrix& p = tape.value(tcp_approx);
  DenseMatrix t = target;
  if (p.cols == 1 && p.rows == target.size()) {
    t = flatten_to_column(target);
  } else if (!p.same_shape(target)) {
    throw std::invalid_argument("tcp_loss: shape mismatch");
  }
  return tape.mse_sum(tcp_approx, std::move(t));
}

NodeId total_loss(Tape& tape, NodeId perm, NodeId tcp, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("total_loss: alpha must be >= 0");
  return tape.add(perm, tape.scale(tcp, alpha));
}

}  // namespace hagmn
