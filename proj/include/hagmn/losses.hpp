#pragma once

#include "hagmn/matrix.hpp"
#include "hagmn/tape.hpp"

namespace hagmn {

/// Flattens an n1 x n2 matrix to (n1*n2) x 1 in row-major vertex order.
DenseMatrix flatten_to_column(const DenseMatrix& m);

/// Permutation loss: binary cross-entropy between the predicted match
/// probability of every vertex and the ground-truth assignment, summed over
/// all (i, a), probabilities clamped at 1e-12.
NodeId perm_loss(Tape& tape, NodeId match_prob, const DenseMatrix& assignment);

/// TCP target: M_ia times the probability the model assigns to class M_ia,
/// i.e. zero where M = 0 and the predicted match probability where M = 1.
/// Computed from values only; never part of the gradient path.
DenseMatrix tcp_target(const DenseMatrix& match_prob, const DenseMatrix& assignment);

/// Confidence loss: sum of squared error between the approximated TCP and
/// the target.
NodeId tcp_loss(Tape& tape, NodeId tcp_approx, const DenseMatrix& target);

/// total = perm + alpha * tcp.
NodeId total_loss(Tape& tape, NodeId perm, NodeId tcp, double alpha);

}  // namespace hagmn
