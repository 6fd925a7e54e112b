#include "hagmn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace hagmn {

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

Mlp Mlp::glorot(std::size_t in, std::size_t hidden, std::size_t out,
                std::size_t layers, Rng& rng) {
  if (layers == 0) throw std::invalid_argument("Mlp: needs at least one layer");
  if (in == 0 || out == 0 || (layers > 1 && hidden == 0))
    throw std::invalid_argument("Mlp: zero layer width");
  Mlp m;
  std::size_t prev = in;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t width = (l + 1 == layers) ? out : hidden;
    const double bound = std::sqrt(6.0 / static_cast<double>(prev + width));
    DenseMatrix w(prev, width);
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(1, width, 0.0);
    prev = width;
  }
  return m;
}

MlpNodes bind_mlp(Tape& tape, const Mlp& m) {
  MlpNodes nodes;
  for (const auto& w : m.weights) nodes.weights.push_back(tape.variable(w));
  for (const auto& b : m.biases) nodes.biases.push_back(tape.variable(b));
  return nodes;
}

NodeId mlp_apply(Tape& tape, const Mlp& m, const MlpNodes& nodes, NodeId x) {
  if (m.weights.empty()) throw std::invalid_argument("mlp_apply: empty Mlp");
  if (tape.value(x).cols != m.in_dim())
    throw std::invalid_argument("mlp_apply: input width " +
                                std::to_string(tape.value(x).cols) + " != " +
                                std::to_string(m.in_dim()));
  NodeId h = x;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    h = tape.add_row(tape.matmul(h, nodes.weights[l]), nodes.biases[l]);
    if (l + 1 < m.weights.size()) h = tape.relu(h);
  }
  return h;
}

NodeId mlp_forward(Tape& tape, const Mlp& m, NodeId x) {
  return mlp_apply(tape, m, bind_mlp(tape, m), x);
}

}  // namespace hagmn
