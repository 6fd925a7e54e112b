#pragma once

#include <map>
#include <string>
#include <vector>

#include "hagmn/matrix.hpp"

namespace hagmn {

struct NamedTensor {
  std::string name;
  DenseMatrix* tensor;
};

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are keyed by parameter name and
/// shaped on first use.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(const std::vector<NamedTensor>& params,
            const std::map<std::string, DenseMatrix>& grads);

  const AdamConfig& config() const { return cfg_; }
  std::size_t step_count() const { return step_count_; }

  // Exposed for checkpointing.
  std::map<std::string, std::pair<DenseMatrix, DenseMatrix>>& moments() { return moments_; }
  const std::map<std::string, std::pair<DenseMatrix, DenseMatrix>>& moments() const {
    return moments_;
  }
  void set_step_count(std::size_t t) { step_count_ = t; }

 private:
  AdamConfig cfg_;
  std::size_t step_count_ = 0;
  std::map<std::string, std::pair<DenseMatrix, DenseMatrix>> moments_;  // (m, v)
};

}  // namespace hagmn
