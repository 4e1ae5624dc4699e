#pragma once

#include <cstdint>
#include <vector>

#include "relwalk/tensor.hpp"

namespace relwalk {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Per-parameter first/second moment estimates plus the shared step counter.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  AdamConfig config;

  explicit AdamState(std::size_t n, AdamConfig cfg = {}) : m(n, 0.0), v(n, 0.0), config(cfg) {}
};

/// One bias-corrected Adam update of `param` from `param.grad`.
void adam_step(Tensor& param, AdamState& state);

// Steps a fixed set of parameters in registration order.
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Tensor*> params, AdamConfig cfg);
  void step();
  const AdamState& state(std::size_t i) const { return states_[i]; }

 private:
  std::vector<Tensor*> params_;
  std::vector<AdamState> states_;
};

/// Global-norm gradient clipping over the grad slots of `params`: if the
/// joint L2 norm exceeds `threshold`, every gradient is scaled by
/// threshold/norm. Non-finite gradients are rejected as divergence.
/// Returns the pre-clip norm.
double clip_gradients(const std::vector<Tensor*>& params, double threshold);

}  // namespace relwalk
