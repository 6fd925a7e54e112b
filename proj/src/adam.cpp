#include "hagmn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace hagmn {

void AdamState::step(const std::vector<NamedTensor>& params,
                     const std::map<std::string, DenseMatrix>& grads) {
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t);
  for (const NamedTensor& p : params) {
    auto git = grads.find(p.name);
    if (git == grads.end())
      throw std::invalid_argument("adam: missing gradient for " + p.name);
    const DenseMatrix& g = git->second;
    DenseMatrix& w = *p.tensor;
    if (!g.same_shape(w))
      throw std::invalid_argument("adam: gradient shape mismatch for " + p.name);
    auto& [m, v] = moments_[p.name];
    if (!m.same_shape(w)) m = DenseMatrix::zeros(w.rows, w.cols);
    if (!v.same_shape(w)) v = DenseMatrix::zeros(w.rows, w.cols);
    for (std::size_t k = 0; k < w.size(); ++k) {
      m.data[k] = cfg_.beta1 * m.data[k] + (1.0 - cfg_.beta1) * g.data[k];
      v.data[k] = cfg_.beta2 * v.data[k] + (1.0 - cfg_.beta2) * g.data[k] * g.data[k];
      const double mhat = m.data[k] / bc1;
      const double vhat = v.data[k] / bc2;
      w.data[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
    check_finite(w, "adam-updated parameter " + p.name);
  }
}

}  // namespace hagmn
