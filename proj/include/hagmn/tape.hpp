#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hagmn/matrix.hpp"

namespace hagmn {

using NodeId = std::size_t;

/// Ragged attention neighborhoods: for query row q, neighbors[q] lists the
/// key/value rows it attends to. An empty list yields a zero output row.
struct AttentionSpec {
  std::vector<std::vector<std::uint32_t>> neighbors;
  int heads = 1;
  /// Mean-pooled form: gate = sigmoid(scale * q . mean(k)), out = gate * mean(v).
  /// Single-head only.
  bool literal = false;
};

/// Reverse-mode tape over DenseMatrix values. Records the primitives the
/// network needs (matmul, add, relu, softmax, sigmoid, concat, mean,
/// scalar-multiply, mse, bce, neighborhood attention) and replays them
/// backward. Parameters that never reach the loss get zero gradients.
/// Single-threaded per instance.
class Tape {
 public:
  NodeId constant(DenseMatrix value);
  NodeId variable(DenseMatrix value);

  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  /// Adds a 1 x c bias row to every row of a.
  NodeId add_row(NodeId a, NodeId bias);
  NodeId hadamard(NodeId a, NodeId b);
  NodeId scale(NodeId a, double s);
  NodeId relu(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId softmax_rows(NodeId a);
  NodeId concat_cols(const std::vector<NodeId>& parts);
  NodeId concat_rows(const std::vector<NodeId>& parts);
  NodeId slice_col(NodeId a, std::size_t col);
  NodeId sum_all(NodeId a);
  NodeId mean_all(NodeId a);
  /// -sum(t*log(p) + (1-t)*log(1-p)) with p clamped to [1e-12, 1-1e-12].
  NodeId bce_sum(NodeId pred, DenseMatrix target);
  /// sum((pred - target)^2).
  NodeId mse_sum(NodeId pred, DenseMatrix target);
  NodeId attention(NodeId q, NodeId k, NodeId v,
                   std::shared_ptr<const AttentionSpec> spec);

  const DenseMatrix& value(NodeId id) const { return nodes_[id].value; }

  /// Seeds d(loss)/d(loss) = 1 and replays the tape backward. `loss` must be
  /// 1 x 1. May be called once per tape.
  void backward(NodeId loss);

  /// Gradient of the last backward() w.r.t. node `id`; zeros if the node did
  /// not participate.
  DenseMatrix gradient(NodeId id) const;

  /// Post-softmax weights of attention node `id` for query row q (head 0).
  std::vector<double> attention_weights(NodeId id, std::size_t q) const;

  std::uint64_t flops() const { return flops_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op {
    kConstant, kVariable, kMatMul, kAdd, kAddRow, kHadamard, kScale, kRelu,
    kSigmoid, kSoftmaxRows, kConcatCols, kConcatRows, kSliceCol, kSumAll,
    kMeanAll, kBceSum, kMseSum, kAttention,
  };

  struct Node {
    Op op;
    DenseMatrix value;
    DenseMatrix grad;  // allocated on demand during backward
    std::vector<NodeId> inputs;
    double scalar = 0.0;
    std::size_t index = 0;
    DenseMatrix target;
    std::shared_ptr<const AttentionSpec> attn;
    std::vector<double> attn_w;       // saved weights, flattened per (q, n, head)
    std::vector<std::size_t> attn_off;
    bool needs_grad = false;
  };

  NodeId push(Node n);
  DenseMatrix& grad_buffer(NodeId id);
  void backward_node(NodeId id);

  std::vector<Node> nodes_;
  std::uint64_t flops_ = 0;
  bool backward_done_ = false;
};

}  // namespace hagmn
