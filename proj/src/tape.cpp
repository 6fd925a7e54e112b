#include "hagmn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hagmn {

namespace {
constexpr double kProbClamp = 1e-12;

double clamp_prob(double p) {
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}
}  // namespace

NodeId Tape::push(Node n) {
  if (backward_done_) throw std::logic_error("tape: cannot record after backward");
  for (NodeId in : n.inputs) {
    if (in >= nodes_.size()) throw std::logic_error("tape: stale node reference");
    n.needs_grad = n.needs_grad || nodes_[in].needs_grad;
  }
  check_finite(n.value, "tape node output");
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

NodeId Tape::constant(DenseMatrix value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  return push(std::move(n));
}

NodeId Tape::variable(DenseMatrix value) {
  Node n;
  n.op = Op::kVariable;
  n.value = std::move(value);
  n.needs_grad = true;
  return push(std::move(n));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  Node n;
  n.op = Op::kMatMul;
  n.inputs = {a, b};
  n.value = hagmn::matmul(value(a), value(b));
  flops_ += 2ull * value(a).rows * value(a).cols * value(b).cols;
  return push(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) {
  if (!value(a).same_shape(value(b)))
    throw std::invalid_argument("tape add: shape mismatch");
  Node n;
  n.op = Op::kAdd;
  n.inputs = {a, b};
  n.value = value(a);
  add_inplace(n.value, value(b));
  flops_ += n.value.size();
  return push(std::move(n));
}

NodeId Tape::add_row(NodeId a, NodeId bias) {
  const DenseMatrix& x = value(a);
  const DenseMatrix& r = value(bias);
  if (r.rows != 1 || r.cols != x.cols)
    throw std::invalid_argument("tape add_row: bias must be 1 x cols");
  Node n;
  n.op = Op::kAddRow;
  n.inputs = {a, bias};
  n.value = x;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) n.value.at(i, j) += r.at(0, j);
  flops_ += x.size();
  return push(std::move(n));
}

NodeId Tape::hadamard(NodeId a, NodeId b) {
  Node n;
  n.op = Op::kHadamard;
  n.inputs = {a, b};
  n.value = hagmn::hadamard(value(a), value(b));
  flops_ += n.value.size();
  return push(std::move(n));
}

NodeId Tape::scale(NodeId a, double s) {
  Node n;
  n.op = Op::kScale;
  n.inputs = {a};
  n.scalar = s;
  n.value = scaled(value(a), s);
  flops_ += n.value.size();
  return push(std::move(n));
}

NodeId Tape::relu(NodeId a) {
  Node n;
  n.op = Op::kRelu;
  n.inputs = {a};
  n.value = value(a);
  for (double& v : n.value.data) v = v > 0.0 ? v : 0.0;
  flops_ += n.value.size();
  return push(std::move(n));
}

NodeId Tape::sigmoid(NodeId a) {
  Node n;
  n.op = Op::kSigmoid;
  n.inputs = {a};
  n.value = value(a);
  for (double& v : n.value.data) v = 1.0 / (1.0 + std::exp(-v));
  flops_ += 4 * n.value.size();
  return push(std::move(n));
}

NodeId Tape::softmax_rows(NodeId a) {
  Node n;
  n.op = Op::kSoftmaxRows;
  n.inputs = {a};
  n.value = value(a);
  DenseMatrix& y = n.value;
  for (std::size_t i = 0; i < y.rows; ++i) {
    double hi = -1e300;
    for (std::size_t j = 0; j < y.cols; ++j) hi = std::max(hi, y.at(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < y.cols; ++j) {
      y.at(i, j) = std::exp(y.at(i, j) - hi);
      z += y.at(i, j);
    }
    for (std::size_t j = 0; j < y.cols; ++j) y.at(i, j) /= z;
  }
  flops_ += 5 * y.size();
  return push(std::move(n));
}

NodeId Tape::concat_cols(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw std::invalid_argument("tape concat_cols: no inputs");
  std::size_t rows = value(parts[0]).rows, cols = 0;
  for (NodeId p : parts) {
    if (value(p).rows != rows)
      throw std::invalid_argument("tape concat_cols: row mismatch");
    cols += value(p).cols;
  }
  Node n;
  n.op = Op::kConcatCols;
  n.inputs = parts;
  n.value = DenseMatrix(rows, cols);
  std::size_t off = 0;
  for (NodeId p : parts) {
    const DenseMatrix& x = value(p);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < x.cols; ++j) n.value.at(i, off + j) = x.at(i, j);
    off += x.cols;
  }
  return push(std::move(n));
}

NodeId Tape::concat_rows(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw std::invalid_argument("tape concat_rows: no inputs");
  std::size_t cols = value(parts[0]).cols, rows = 0;
  for (NodeId p : parts) {
    if (value(p).cols != cols)
      throw std::invalid_argument("tape concat_rows: col mismatch");
    rows += value(p).rows;
  }
  Node n;
  n.op = Op::kConcatRows;
  n.inputs = parts;
  n.value = DenseMatrix(rows, cols);
  std::size_t off = 0;
  for (NodeId p : parts) {
    const DenseMatrix& x = value(p);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) n.value.at(off + i, j) = x.at(i, j);
    off += x.rows;
  }
  return push(std::move(n));
}

NodeId Tape::slice_col(NodeId a, std::size_t col) {
  const DenseMatrix& x = value(a);
  if (col >= x.cols) throw std::invalid_argument("tape slice_col: out of range");
  Node n;
  n.op = Op::kSliceCol;
  n.inputs = {a};
  n.index = col;
  n.value = DenseMatrix(x.rows, 1);
  for (std::size_t i = 0; i < x.rows; ++i) n.value.at(i, 0) = x.at(i, col);
  return push(std::move(n));
}

NodeId Tape::sum_all(NodeId a) {
  Node n;
  n.op = Op::kSumAll;
  n.inputs = {a};
  double s = 0.0;
  for (double v : value(a).data) s += v;
  n.value = DenseMatrix(1, 1, s);
  flops_ += value(a).size();
  return push(std::move(n));
}

NodeId Tape::mean_all(NodeId a) {
  if (value(a).empty()) throw std::invalid_argument("tape mean_all: empty input");
  Node n;
  n.op = Op::kMeanAll;
  n.inputs = {a};
  double s = 0.0;
  for (double v : value(a).data) s += v;
  n.value = DenseMatrix(1, 1, s / static_cast<double>(value(a).size()));
  flops_ += value(a).size();
  return push(std::move(n));
}

NodeId Tape::bce_sum(NodeId pred, DenseMatrix target) {
  const DenseMatrix& p = value(pred);
  if (!p.same_shape(target)) throw std::invalid_argument("tape bce_sum: shape mismatch");
  Node n;
  n.op = Op::kBceSum;
  n.inputs = {pred};
  n.target = std::move(target);
  double loss = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double ph = clamp_prob(p.data[k]);
    const double t = n.target.data[k];
    loss -= t * std::log(ph) + (1.0 - t) * std::log(1.0 - ph);
  }
  n.value = DenseMatrix(1, 1, loss);
  flops_ += 6 * p.size();
  return push(std::move(n));
}

NodeId Tape::mse_sum(NodeId pred, DenseMatrix target) {
  const DenseMatrix& p = value(pred);
  if (!p.same_shape(target)) throw std::invalid_argument("tape mse_sum: shape mismatch");
  Node n;
  n.op = Op::kMseSum;
  n.inputs = {pred};
  n.target = std::move(target);
  double loss = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double e = p.data[k] - n.target.data[k];
    loss += e * e;
  }
  n.value = DenseMatrix(1, 1, loss);
  flops_ += 3 * p.size();
  return push(std::move(n));
}

NodeId Tape::attention(NodeId q, NodeId k, NodeId v,
                       std::shared_ptr<const AttentionSpec> spec) {
  const DenseMatrix& Q = value(q);
  const DenseMatrix& K = value(k);
  const DenseMatrix& V = value(v);
  if (!spec) throw std::invalid_argument("tape attention: missing spec");
  const int heads = spec->heads;
  if (heads < 1 || Q.cols % heads != 0 || V.cols % heads != 0)
    throw std::invalid_argument("tape attention: head count must divide widths");
  if (Q.cols != K.cols) throw std::invalid_argument("tape attention: q/k width mismatch");
  if (K.rows != V.rows) throw std::invalid_argument("tape attention: k/v row mismatch");
  if (spec->neighbors.size() != Q.rows)
    throw std::invalid_argument("tape attention: neighborhood count mismatch");
  if (spec->literal && heads != 1)
    throw std::invalid_argument("tape attention: literal mode is single-head");

  const std::size_t dk = Q.cols / heads;
  const std::size_t dv = V.cols / heads;
  const double sc = 1.0 / std::sqrt(static_cast<double>(dk));

  Node n;
  n.op = Op::kAttention;
  n.inputs = {q, k, v};
  n.attn = spec;
  n.value = DenseMatrix(Q.rows, V.cols);
  n.attn_off.resize(Q.rows + 1, 0);
  for (std::size_t i = 0; i < Q.rows; ++i) {
    for (std::uint32_t nb : spec->neighbors[i])
      if (nb >= K.rows) throw std::invalid_argument("tape attention: neighbor out of range");
    n.attn_off[i + 1] = n.attn_off[i] + spec->neighbors[i].size();
  }
  n.attn_w.resize(n.attn_off.back() * heads, 0.0);

  std::vector<double> scores;
  for (std::size_t i = 0; i < Q.rows; ++i) {
    const auto& nbs = spec->neighbors[i];
    if (nbs.empty()) continue;
    const double inv = 1.0 / static_cast<double>(nbs.size());
    for (int h = 0; h < heads; ++h) {
      const std::size_t qo = h * dk, vo = h * dv;
      if (spec->literal) {
        // gate = sigmoid(scale * q . mean(k)); out = gate * mean(v)
        double s = 0.0;
        for (std::size_t c = 0; c < dk; ++c) {
          double km = 0.0;
          for (std::uint32_t nb : nbs) km += K.at(nb, qo + c);
          s += Q.at(i, qo + c) * km * inv;
        }
        const double gate = 1.0 / (1.0 + std::exp(-s * sc));
        n.attn_w[n.attn_off[i] * heads + h] = gate;  // slot 0 stores the gate
        for (std::size_t c = 0; c < dv; ++c) {
          double vm = 0.0;
          for (std::uint32_t nb : nbs) vm += V.at(nb, vo + c);
          n.value.at(i, vo + c) = gate * vm * inv;
        }
      } else {
        scores.assign(nbs.size(), 0.0);
        double hi = -1e300;
        for (std::size_t t = 0; t < nbs.size(); ++t) {
          double s = 0.0;
          for (std::size_t c = 0; c < dk; ++c)
            s += Q.at(i, qo + c) * K.at(nbs[t], qo + c);
          scores[t] = s * sc;
          hi = std::max(hi, scores[t]);
        }
        double z = 0.0;
        for (double& s : scores) {
          s = std::exp(s - hi);
          z += s;
        }
        for (std::size_t t = 0; t < nbs.size(); ++t) {
          const double w = scores[t] / z;
          n.attn_w[(n.attn_off[i] + t) * heads + h] = w;
          for (std::size_t c = 0; c < dv; ++c)
            n.value.at(i, vo + c) += w * V.at(nbs[t], vo + c);
        }
      }
    }
    flops_ += nbs.size() * (2 * dk + 2 * dv + 4) * heads;
  }
  return push(std::move(n));
}

DenseMatrix& Tape::grad_buffer(NodeId id) {
  Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty())
    n.grad = DenseMatrix::zeros(n.value.rows, n.value.cols);
  if (n.grad.rows != n.value.rows || n.grad.cols != n.value.cols)
    n.grad = DenseMatrix::zeros(n.value.rows, n.value.cols);
  return n.grad;
}

void Tape::backward(NodeId loss) {
  if (loss >= nodes_.size()) throw std::invalid_argument("backward: unknown node");
  if (backward_done_) throw std::logic_error("backward: already run on this tape");
  const Node& ln = nodes_[loss];
  if (ln.value.rows != 1 || ln.value.cols != 1)
    throw std::invalid_argument("backward: loss must be a 1x1 scalar");
  backward_done_ = true;
  grad_buffer(loss).at(0, 0) = 1.0;
  for (std::size_t i = loss + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    if (n.grad.empty() || !n.needs_grad) continue;
    backward_node(i);
  }
}

void Tape::backward_node(NodeId id) {
  Node& n = nodes_[id];
  const DenseMatrix& g = n.grad;
  auto want = [&](NodeId in) { return nodes_[in].needs_grad; };

  switch (n.op) {
    case Op::kConstant:
    case Op::kVariable:
      break;
    case Op::kMatMul: {
      NodeId a = n.inputs[0], b = n.inputs[1];
      if (want(a)) add_inplace(grad_buffer(a), matmul_nt(g, nodes_[b].value));
      if (want(b)) add_inplace(grad_buffer(b), matmul_tn(nodes_[a].value, g));
      flops_ += 4ull * nodes_[a].value.rows * nodes_[a].value.cols * nodes_[b].value.cols;
      break;
    }
    case Op::kAdd:
      for (NodeId in : n.inputs)
        if (want(in)) add_inplace(grad_buffer(in), g);
      break;
    case Op::kAddRow: {
      NodeId a = n.inputs[0], bias = n.inputs[1];
      if (want(a)) add_inplace(grad_buffer(a), g);
      if (want(bias)) {
        DenseMatrix& bg = grad_buffer(bias);
        for (std::size_t i = 0; i < g.rows; ++i)
          for (std::size_t j = 0; j < g.cols; ++j) bg.at(0, j) += g.at(i, j);
      }
      break;
    }
    case Op::kHadamard: {
      NodeId a = n.inputs[0], b = n.inputs[1];
      if (want(a)) add_inplace(grad_buffer(a), hagmn::hadamard(g, nodes_[b].value));
      if (want(b)) add_inplace(grad_buffer(b), hagmn::hadamard(g, nodes_[a].value));
      break;
    }
    case Op::kScale:
      if (want(n.inputs[0])) axpy_inplace(grad_buffer(n.inputs[0]), n.scalar, g);
      break;
    case Op::kRelu: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        const DenseMatrix& x = nodes_[a].value;
        for (std::size_t k = 0; k < g.size(); ++k)
          if (x.data[k] > 0.0) ag.data[k] += g.data[k];
      }
      break;
    }
    case Op::kSigmoid: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double y = n.value.data[k];
          ag.data[k] += g.data[k] * y * (1.0 - y);
        }
      }
      break;
    }
    case Op::kSoftmaxRows: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        for (std::size_t i = 0; i < g.rows; ++i) {
          double dot = 0.0;
          for (std::size_t j = 0; j < g.cols; ++j) dot += g.at(i, j) * n.value.at(i, j);
          for (std::size_t j = 0; j < g.cols; ++j)
            ag.at(i, j) += n.value.at(i, j) * (g.at(i, j) - dot);
        }
      }
      break;
    }
    case Op::kConcatCols: {
      std::size_t off = 0;
      for (NodeId in : n.inputs) {
        const std::size_t w = nodes_[in].value.cols;
        if (want(in)) {
          DenseMatrix& ig = grad_buffer(in);
          for (std::size_t i = 0; i < g.rows; ++i)
            for (std::size_t j = 0; j < w; ++j) ig.at(i, j) += g.at(i, off + j);
        }
        off += w;
      }
      break;
    }
    case Op::kConcatRows: {
      std::size_t off = 0;
      for (NodeId in : n.inputs) {
        const std::size_t h = nodes_[in].value.rows;
        if (want(in)) {
          DenseMatrix& ig = grad_buffer(in);
          for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < g.cols; ++j) ig.at(i, j) += g.at(off + i, j);
        }
        off += h;
      }
      break;
    }
    case Op::kSliceCol: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        for (std::size_t i = 0; i < g.rows; ++i) ag.at(i, n.index) += g.at(i, 0);
      }
      break;
    }
    case Op::kSumAll: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        for (double& v : ag.data) v += g.at(0, 0);
      }
      break;
    }
    case Op::kMeanAll: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        const double s = g.at(0, 0) / static_cast<double>(ag.size());
        for (double& v : ag.data) v += s;
      }
      break;
    }
    case Op::kBceSum: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        const DenseMatrix& p = nodes_[a].value;
        const double gs = g.at(0, 0);
        for (std::size_t k = 0; k < p.size(); ++k) {
          const double ph = clamp_prob(p.data[k]);
          const double t = n.target.data[k];
          ag.data[k] += gs * (ph - t) / (ph * (1.0 - ph));
        }
      }
      break;
    }
    case Op::kMseSum: {
      NodeId a = n.inputs[0];
      if (want(a)) {
        DenseMatrix& ag = grad_buffer(a);
        const DenseMatrix& p = nodes_[a].value;
        const double gs = g.at(0, 0);
        for (std::size_t k = 0; k < p.size(); ++k)
          ag.data[k] += gs * 2.0 * (p.data[k] - n.target.data[k]);
      }
      break;
    }
    case Op::kAttention: {
      NodeId qi = n.inputs[0], ki = n.inputs[1], vi = n.inputs[2];
      const DenseMatrix& Q = nodes_[qi].value;
      const DenseMatrix& K = nodes_[ki].value;
      const DenseMatrix& V = nodes_[vi].value;
      const int heads = n.attn->heads;
      const std::size_t dk = Q.cols / heads;
      const std::size_t dv = V.cols / heads;
      const double sc = 1.0 / std::sqrt(static_cast<double>(dk));
      DenseMatrix& qg = grad_buffer(qi);
      DenseMatrix& kg = grad_buffer(ki);
      DenseMatrix& vg = grad_buffer(vi);
      std::vector<double> dw;
      for (std::size_t i = 0; i < Q.rows; ++i) {
        const auto& nbs = n.attn->neighbors[i];
        if (nbs.empty()) continue;
        const double inv = 1.0 / static_cast<double>(nbs.size());
        for (int h = 0; h < heads; ++h) {
          const std::size_t qo = h * dk, vo = h * dv;
          if (n.attn->literal) {
            const double gate = n.attn_w[n.attn_off[i] * heads + h];
            // d(out)/d(vm) = gate; d(out)/d(gate) = vm
            double dgate = 0.0;
            for (std::size_t c = 0; c < dv; ++c) {
              double vm = 0.0;
              for (std::uint32_t nb : nbs) vm += V.at(nb, vo + c);
              vm *= inv;
              dgate += g.at(i, vo + c) * vm;
              const double dvm = g.at(i, vo + c) * gate * inv;
              for (std::uint32_t nb : nbs) vg.at(nb, vo + c) += dvm;
            }
            const double ds = dgate * gate * (1.0 - gate) * sc;
            for (std::size_t c = 0; c < dk; ++c) {
              double km = 0.0;
              for (std::uint32_t nb : nbs) km += K.at(nb, qo + c);
              km *= inv;
              qg.at(i, qo + c) += ds * km;
              const double dkm = ds * Q.at(i, qo + c) * inv;
              for (std::uint32_t nb : nbs) kg.at(nb, qo + c) += dkm;
            }
          } else {
            dw.assign(nbs.size(), 0.0);
            double wdot = 0.0;
            for (std::size_t t = 0; t < nbs.size(); ++t) {
              double d = 0.0;
              for (std::size_t c = 0; c < dv; ++c)
                d += g.at(i, vo + c) * V.at(nbs[t], vo + c);
              dw[t] = d;
              wdot += d * n.attn_w[(n.attn_off[i] + t) * heads + h];
            }
            for (std::size_t t = 0; t < nbs.size(); ++t) {
              const double w = n.attn_w[(n.attn_off[i] + t) * heads + h];
              for (std::size_t c = 0; c < dv; ++c)
                vg.at(nbs[t], vo + c) += w * g.at(i, vo + c);
              const double dscore = w * (dw[t] - wdot) * sc;
              for (std::size_t c = 0; c < dk; ++c) {
                qg.at(i, qo + c) += dscore * K.at(nbs[t], qo + c);
                kg.at(nbs[t], qo + c) += dscore * Q.at(i, qo + c);
              }
            }
          }
        }
        flops_ += nbs.size() * (4 * dk + 4 * dv + 8) * heads;
      }
      break;
    }
  }
}

DenseMatrix Tape::gradient(NodeId id) const {
  if (id >= nodes_.size()) throw std::invalid_argument("gradient: unknown node");
  const Node& n = nodes_[id];
  if (n.grad.empty()) return DenseMatrix::zeros(n.value.rows, n.value.cols);
  return n.grad;
}

std::vector<double> Tape::attention_weights(NodeId id, std::size_t q) const {
  const Node& n = nodes_[id];
  if (n.op != Op::kAttention) throw std::invalid_argument("attention_weights: not an attention node");
  if (q + 1 >= n.attn_off.size()) throw std::invalid_argument("attention_weights: bad query row");
  std::vector<double> out;
  for (std::size_t t = n.attn_off[q]; t < n.attn_off[q + 1]; ++t)
    out.push_back(n.attn_w[t * n.attn->heads]);
  return out;
}

}  // namespace hagmn
