#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hagmn/matrix.hpp"
#include "hagmn/rng.hpp"
#include "hagmn/tape.hpp"

namespace hagmn {

/// Multilayer perceptron weights. Hidden layers use ReLU, the output layer is
/// linear. The default network is 2 layers of 64 neurons.
struct Mlp {
  std::vector<DenseMatrix> weights;  // layer l: (in_l x out_l)
  std::vector<DenseMatrix> biases;   // layer l: (1 x out_l)

  std::size_t in_dim() const { return weights.empty() ? 0 : weights.front().rows; }
  std::size_t out_dim() const { return weights.empty() ? 0 : weights.back().cols; }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t parameter_count() const;

  /// Glorot-uniform weights, zero biases. `layers` counts weight layers; with
  /// layers >= 2 every hidden width is `hidden`.
  static Mlp glorot(std::size_t in, std::size_t hidden, std::size_t out,
                    std::size_t layers, Rng& rng);
};

/// Tape bindings for one Mlp: every weight/bias registered as a variable.
struct MlpNodes {
  std::vector<NodeId> weights;
  std::vector<NodeId> biases;
};

MlpNodes bind_mlp(Tape& tape, const Mlp& m);

/// Forward pass through bound weights. Rejects inputs whose width differs
/// from the Mlp input width.
NodeId mlp_apply(Tape& tape, const Mlp& m, const MlpNodes& nodes, NodeId x);

/// Convenience bind-and-apply for a single use of `m` on this tape.
NodeId mlp_forward(Tape& tape, const Mlp& m, NodeId x);

}  // namespace hagmn
